#include "wmsim/audio_serial.hpp"

#include <string>

namespace wmsim {

void validate(const AudioWordConfig& cfg) {
  switch (cfg.bit_length) {
    case 16:
    case 20:
    case 24:
    case 32: return;
    default:
      throw ConfigError("audio.bit_length: must be 16, 20, 24 or 32, got " +
                        std::to_string(cfg.bit_length));
  }
}

int32_t sample_min(uint32_t bit_length) {
  return -(int32_t(1) << (bit_length - 1));
}

int32_t sample_max(uint32_t bit_length) {
  return int32_t((uint32_t(1) << (bit_length - 1)) - 1);
}

int32_t sign_extend(uint64_t word, uint32_t bit_length) {
  const uint64_t mask = bit_length == 64 ? ~0ull : ((1ull << bit_length) - 1);
  uint64_t v = word & mask;
  if (v & (1ull << (bit_length - 1))) v |= ~mask;
  return int32_t(int64_t(v));
}

static uint64_t pack_frame(StereoSample s, uint32_t bl) {
  const uint64_t mask = (bl == 64) ? ~0ull : ((1ull << bl) - 1);
  return ((uint64_t(uint32_t(s.left)) & mask) << bl) |
         (uint64_t(uint32_t(s.right)) & mask);
}

DacSerializer::DacSerializer(const ClockGen* cg, AudioWordConfig wc)
    : cg_(cg), wc_(wc) {
  validate(wc_);
  div_ = cg_->config().divider;
  period_ = uint64_t(div_) * cg_->config().fs_divider;
}

uint8_t DacSerializer::frame_bit(uint64_t i) const {
  return uint8_t((shift_ >> (2 * wc_.bit_length - 1 - i)) & 1);
}

void DacSerializer::tick(uint64_t t, const PinState&, PinState& out) {
  if (!enabled_) {
    out.dac_lrc = 0;
    out.dac_dat = 0;
    active_ = false;
    busy_ = false;
    return;
  }
  if (t % period_ == 0) {
    // Frame boundary: latch the output registers and raise LRC.
    shift_ = pack_frame({int32_t(reg_l_), int32_t(reg_r_)}, wc_.bit_length);
    frame_start_ = t;
    active_ = true;
    busy_ = true;
    lrc_seen_ = true;
  }
  if (!active_) {
    out.dac_lrc = 0;
    return;
  }
  const uint64_t off = t - frame_start_;
  out.dac_lrc = off < div_ ? 1 : 0;
  if (t % div_ == 0) {
    // BCLK falling edge boundary: cell 0 carries the LRC pulse, cells
    // 1..2*bit_length carry the data bits, then the line returns low.
    const uint64_t cell = off / div_;
    if (cell == 0) {
      out.dac_dat = 0;
    } else if (cell <= 2 * wc_.bit_length) {
      out.dac_dat = frame_bit(cell - 1);
    } else {
      out.dac_dat = 0;
      busy_ = false;
      active_ = false;
    }
  }
}

AdcDeserializer::AdcDeserializer(const ClockGen* cg, AudioWordConfig wc)
    : cg_(cg), wc_(wc) {
  validate(wc_);
  div_ = cg_->config().divider;
  period_ = uint64_t(div_) * cg_->config().fs_divider;
}

void AdcDeserializer::tick(uint64_t t, const PinState& in, PinState& out) {
  if (!enabled_) {
    out.adc_lrc = 0;
    active_ = false;
    busy_ = false;
    return;
  }
  if (t % period_ == 0) {
    frame_start_ = t;
    active_ = true;
    busy_ = true;
    lrc_seen_ = true;
    acc_ = 0;
  }
  if (!active_) {
    out.adc_lrc = 0;
    return;
  }
  const uint64_t off = t - frame_start_;
  out.adc_lrc = off < div_ ? 1 : 0;
  if (cg_->bclk_rising()) {
    // Capture on the rising edge: `in` holds the line as it was just
    // before the edge.
    const uint64_t cell = off / div_;
    if (cell >= 1 && cell <= 2 * wc_.bit_length) {
      acc_ = (acc_ << 1) | in.adc_dat;
    }
  }
  if (t % div_ == 0 && off == (2ull * wc_.bit_length + 1) * div_) {
    // Last data cell closed: commit both words in the same tick.
    reg_l_ = sign_extend(acc_ >> wc_.bit_length, wc_.bit_length);
    reg_r_ = sign_extend(acc_, wc_.bit_length);
    busy_ = false;
    active_ = false;
  }
}

// ---- trace decoding ----

namespace {

// Ticks of value transitions into `to` (edges), derived from the RLE trace.
std::vector<uint64_t> edge_ticks(const PinTrace& tr, uint8_t to, uint64_t from,
                                 uint64_t end) {
  std::vector<uint64_t> out;
  uint8_t prev = PinState::kZ;
  bool have_prev = false;
  for (const auto& [tick, v] : tr.changes) {
    if (tick > end) break;
    if (have_prev && tick >= from && v == to && prev != to) out.push_back(tick);
    prev = v;
    have_prev = true;
  }
  return out;
}

}  // namespace

AudioFrame decode_frame(const PinTrace& bclk, const PinTrace& lrc,
                        const PinTrace& dat, uint32_t bit_length,
                        uint64_t from_tick, uint64_t end_tick) {
  auto lrc_rises = edge_ticks(lrc, 1, from_tick, end_tick);
  if (lrc_rises.empty()) {
    throw DecodeError("no LRC pulse at or after tick " + std::to_string(from_tick),
                      from_tick);
  }
  const uint64_t T = lrc_rises.front();

  auto bclk_rises = edge_ticks(bclk, 1, 0, end_tick);
  if (bclk_rises.size() < 2) throw DecodeError("no BCLK activity in trace", T);
  const uint64_t d = bclk_rises[1] - bclk_rises[0];

  auto lrc_falls = edge_ticks(lrc, 0, T, end_tick);
  if (lrc_falls.empty()) {
    throw DecodeError("LRC never falls after the pulse at tick " + std::to_string(T), T);
  }
  if (lrc_falls.front() != T + d) {
    throw DecodeError("LRC width is " + std::to_string(lrc_falls.front() - T) +
                          " ticks at tick " + std::to_string(T) +
                          ", expected one BCLK cycle (" + std::to_string(d) + ")",
                      T);
  }

  // Data bits sit on the BCLK rising edges after the LRC cycle.
  uint64_t word = 0;
  uint32_t got = 0;
  for (uint64_t r : bclk_rises) {
    if (r <= T + d) continue;
    const uint8_t v = dat.value_at(r);
    if (v > 1) throw DecodeError("data line undriven at tick " + std::to_string(r), r);
    word = (word << 1) | v;
    if (++got == 2 * bit_length) break;
  }
  if (got < 2 * bit_length) {
    throw DecodeError("truncated frame starting at tick " + std::to_string(T), T);
  }

  AudioFrame f;
  f.lrc_tick = T;
  f.sample.left = sign_extend(word >> bit_length, bit_length);
  f.sample.right = sign_extend(word, bit_length);
  return f;
}

std::vector<AudioFrame> decode_frames(const PinTrace& bclk, const PinTrace& lrc,
                                      const PinTrace& dat, uint32_t bit_length,
                                      uint64_t end_tick) {
  std::vector<AudioFrame> out;
  auto lrc_rises = edge_ticks(lrc, 1, 0, end_tick);
  auto bclk_rises = edge_ticks(bclk, 1, 0, end_tick);
  if (lrc_rises.empty()) return out;
  if (bclk_rises.size() < 2) return out;
  const uint64_t d = bclk_rises[1] - bclk_rises[0];
  for (uint64_t T : lrc_rises) {
    // Skip a frame still in flight when the trace ends.
    if (T + (2ull * bit_length + 1) * d > end_tick) break;
    out.push_back(decode_frame(bclk, lrc, dat, bit_length, T, end_tick));
  }
  return out;
}

}  // namespace wmsim
