#include "wmsim/codec_model.hpp"

#include <string>

namespace wmsim {

void CodecRegisterFile::commit(uint8_t addr, uint16_t data) {
  if (addr == 0x0F) {
    regs.fill(0);
    return;
  }
  if (addr < regs.size()) regs[addr] = data & 0x1FF;
}

uint16_t format_register_value(uint32_t bit_length) {
  uint16_t iwl = 0;
  switch (bit_length) {
    case 16: iwl = 0; break;
    case 20: iwl = 1; break;
    case 24: iwl = 2; break;
    case 32: iwl = 3; break;
    default:
      throw ConfigError("audio.bit_length: must be 16, 20, 24 or 32");
  }
  return uint16_t(0x3 | (iwl << 2));  // FORMAT=11 (DSP), LRP=0 (mode A)
}

uint32_t format_register_bit_length(const CodecRegisterFile& regs) {
  switch ((regs.read(0x07) >> 2) & 0x3) {
    case 0: return 16;
    case 1: return 20;
    case 2: return 24;
    default: return 32;
  }
}

CodecModel::CodecModel(AudioWordConfig wc, I2cConfig i2c) : wc_(wc) {
  validate(wc_);
  validate(i2c);
  my_addr_byte_ = address_byte(i2c);
}

void CodecModel::drive_adc_from(const std::vector<StereoSample>& stimulus,
                                uint32_t stimulus_bit_length) {
  if (stimulus_bit_length != wc_.bit_length) {
    throw ConfigError("adc stimulus bit depth " + std::to_string(stimulus_bit_length) +
                      " does not match the configured word length " +
                      std::to_string(wc_.bit_length));
  }
  const int32_t lo = sample_min(wc_.bit_length);
  const int32_t hi = sample_max(wc_.bit_length);
  for (const auto& s : stimulus) {
    if (s.left < lo || s.left > hi || s.right < lo || s.right > hi) {
      throw ConfigError("adc stimulus sample out of range for " +
                        std::to_string(wc_.bit_length) + "-bit words");
    }
  }
  stim_ = stimulus;
  stim_pos_ = 0;
  stim_exhausted_ = false;
}

void CodecModel::i2c_tick(const PinState& in) {
  const uint8_t scl = in.sclk;
  const uint8_t sda = in.sdin_level();
  const uint8_t pscl = prev_.sclk;
  const uint8_t psda = prev_.sdin_level();

  const bool start = scl && pscl && psda == 1 && sda == 0;
  const bool stop = scl && pscl && psda == 0 && sda == 1;
  const bool rise = scl && !pscl;
  const bool fall = !scl && pscl;

  if (start) {
    bus_ = Bus::Byte;
    shift_ = 0;
    bit_count_ = 0;
    byte_index_ = 0;
    byte_done_ = false;
    driving_ack_ = false;
    return;
  }
  if (stop) {
    bus_ = Bus::Idle;
    driving_ack_ = false;
    return;
  }

  switch (bus_) {
    case Bus::Idle:
    case Bus::Ignore:
      break;

    case Bus::Byte:
      if (rise && !byte_done_) {
        shift_ = uint8_t((shift_ << 1) | sda);
        if (++bit_count_ == 8) byte_done_ = true;
      } else if (fall && byte_done_) {
        bytes_[byte_index_] = shift_;
        if (byte_index_ == 0 && shift_ != my_addr_byte_) {
          // Not our chip address (or a read): stay silent until stop.
          bus_ = Bus::Ignore;
        } else {
          driving_ack_ = true;
          bus_ = Bus::AckDrive;
        }
      }
      break;

    case Bus::AckDrive:
      if (fall) {
        // Falling edge closes the ack clock: release the line.
        driving_ack_ = false;
        ++byte_index_;
        if (byte_index_ == 3) {
          const uint8_t reg = uint8_t(bytes_[1] >> 1);
          const uint16_t data = uint16_t(((bytes_[1] & 1) << 8) | bytes_[2]);
          regs_.commit(reg, data);
          write_log_.emplace_back(reg, data);
          bus_ = Bus::Idle;  // the master raises the stop next
        } else {
          bus_ = Bus::Byte;
          shift_ = 0;
          bit_count_ = 0;
          byte_done_ = false;
        }
      }
      break;
  }
}

void CodecModel::audio_tick(uint64_t t, const PinState& in, PinState& out) {
  const bool bclk_fall = !in.bclk && prev_.bclk;
  const uint64_t in_tick = t - 1;  // `in` is the state after tick t-1

  // ADC side: serialize the stimulus, shifting on BCLK falling edges.
  if (in.adc_lrc && !prev_.adc_lrc) {
    StereoSample s{};
    if (stim_pos_ < stim_.size()) {
      s = stim_[stim_pos_++];
    } else {
      stim_exhausted_ = true;
    }
    adc_shift_ = (uint64_t(uint32_t(s.left)) & ((1ull << wc_.bit_length) - 1))
                     << wc_.bit_length |
                 (uint64_t(uint32_t(s.right)) & ((1ull << wc_.bit_length) - 1));
    adc_cell_ = 0;
    adc_active_ = true;
  }
  if (adc_active_ && bclk_fall) {
    if (adc_cell_ == 0) {
      out.adc_dat = 0;  // LRC cell
    } else if (adc_cell_ <= 2 * wc_.bit_length) {
      out.adc_dat =
          uint8_t((adc_shift_ >> (2 * wc_.bit_length - adc_cell_)) & 1);
    } else {
      out.adc_dat = 0;
      adc_active_ = false;
    }
    ++adc_cell_;
  }

  // DAC side: record the frame window, decode it when it closes.
  if (in.dac_lrc && !prev_.dac_lrc) {
    win_active_ = true;
    win_start_ = in_tick;
    win_falls_ = 0;
    win_bclk_.changes.clear();
    win_lrc_.changes.clear();
    win_dat_.changes.clear();
    if (in_tick > 0) {
      win_bclk_.append(in_tick - 1, prev_.bclk);
      win_lrc_.append(in_tick - 1, prev_.dac_lrc);
      win_dat_.append(in_tick - 1, prev_.dac_dat);
    }
  }
  if (win_active_) {
    win_bclk_.append(in_tick, in.bclk);
    win_lrc_.append(in_tick, in.dac_lrc);
    win_dat_.append(in_tick, in.dac_dat);
    if (bclk_fall && in_tick > win_start_) {
      ++win_falls_;
      if (win_falls_ == 2ull * wc_.bit_length + 1) {
        // All data cells closed; decode strictly.
        AudioFrame f = decode_frame(win_bclk_, win_lrc_, win_dat_,
                                    wc_.bit_length, win_start_, in_tick);
        frames_.push_back(f);
        capture_.push_back(f.sample);
        win_active_ = false;
      }
    }
  }
}

void CodecModel::tick(uint64_t t, const PinState& in, PinState& out) {
  i2c_tick(in);
  out.sdin_we_slave = driving_ack_;
  out.sdin_slave = 0;
  audio_tick(t, in, out);
  prev_ = in;
}

// ---- trace-level transaction decoding ----

std::vector<I2cTransaction> decode_i2c(const PinTrace& sclk, const PinTrace& sdin,
                                       uint64_t end_tick) {
  // Merge both traces into a tick-ordered walk, tracking logic levels
  // (a released sdin reads 1 through the pull-up).
  std::vector<I2cTransaction> out;
  size_t ic = 0, id = 0;
  uint8_t scl = sclk.empty() ? 1 : sclk.changes.front().second;
  uint8_t sda_raw = sdin.empty() ? PinState::kZ : sdin.changes.front().second;
  auto level = [](uint8_t v) -> uint8_t { return v == PinState::kZ ? 1 : v; };

  bool in_txn = false;
  I2cTransaction cur;
  std::vector<uint8_t> bits;

  auto finalize = [&](uint64_t stop_tick) {
    cur.stop_tick = stop_tick;
    cur.bit_clocks = uint32_t(bits.size());
    // Whole 9-bit cells plus exactly one low stop-preamble bit.
    const size_t groups = bits.size() / 9;
    cur.well_formed = groups >= 1 && bits.size() % 9 == 1 && bits.back() == 0;
    if (cur.well_formed) {
      cur.bit_clocks = uint32_t(bits.size() - 1);  // data and ack clocks
      for (size_t g = 0; g < groups; ++g) {
        uint8_t byte = 0;
        for (int b = 0; b < 8; ++b) byte = uint8_t((byte << 1) | bits[g * 9 + b]);
        if (g == 0) {
          cur.addr_byte = byte;
        } else {
          cur.payload.push_back(byte);
        }
        cur.acks.push_back(bits[g * 9 + 8] == 0);
      }
    }
    out.push_back(cur);
    in_txn = false;
    bits.clear();
  };

  while (ic < sclk.changes.size() || id < sdin.changes.size()) {
    const uint64_t tc = ic < sclk.changes.size() ? sclk.changes[ic].first : UINT64_MAX;
    const uint64_t td = id < sdin.changes.size() ? sdin.changes[id].first : UINT64_MAX;
    const uint64_t t = std::min(tc, td);
    if (t > end_tick) break;

    if (tc == t) {
      const uint8_t nscl = sclk.changes[ic].second;
      if (in_txn && nscl == 1 && scl == 0) {
        bits.push_back(level(sda_raw));  // sample on the rising edge
      }
      scl = nscl;
      ++ic;
    }
    if (td == t) {
      const uint8_t nraw = sdin.changes[id].second;
      const uint8_t old_lvl = level(sda_raw);
      const uint8_t new_lvl = level(nraw);
      if (scl == 1 && old_lvl == 1 && new_lvl == 0) {
        // Start condition; also resets a transaction already in flight.
        if (in_txn) finalize(t);
        in_txn = true;
        cur = I2cTransaction{};
        cur.start_tick = t;
      } else if (scl == 1 && old_lvl == 0 && new_lvl == 1 && in_txn) {
        finalize(t);
      }
      sda_raw = nraw;
      ++id;
    }
  }
  if (in_txn) {
    // Trace ended mid-transaction: report it as malformed.
    cur.stop_tick = end_tick;
    cur.bit_clocks = uint32_t(bits.size());
    cur.well_formed = false;
    out.push_back(cur);
  }
  return out;
}

}  // namespace wmsim
