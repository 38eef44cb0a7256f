#pragma once

#include <cstdint>
#include <vector>

#include "wmsim/clockgen.hpp"
#include "wmsim/sim.hpp"

namespace wmsim {

struct AudioWordConfig {
  uint32_t bit_length = 16;  // 16, 20, 24 or 32
};

void validate(const AudioWordConfig& cfg);

int32_t sample_min(uint32_t bit_length);
int32_t sample_max(uint32_t bit_length);

struct StereoSample {
  int32_t left = 0;
  int32_t right = 0;
  bool operator==(const StereoSample&) const = default;
};

// One decoded frame from a pin-level trace.
struct AudioFrame {
  uint64_t lrc_tick = 0;  // tick of the LRC rising edge
  StereoSample sample;
  bool operator==(const AudioFrame&) const = default;
};

// Frame layout (one frame per lrc_period ticks, boundaries at multiples of
// the period): LRC is high for exactly one BCLK cycle, then the left word
// and the right word follow back to back, MSB first, two's complement. The
// first data bit sits in the BCLK cycle immediately after the LRC cycle.
// Data lines move on BCLK falling edges; receivers sample on rising edges.
//
// The unit is busy from the LRC pulse until the last data cell closes,
// (1 + 2*bit_length) BCLK periods later. Enabling mid-stream takes effect
// at the next frame boundary, so the LRC cadence is phase stable.
class DacSerializer final : public Device {
 public:
  DacSerializer(const ClockGen* cg, AudioWordConfig wc);

  void write_left(uint32_t v) { reg_l_ = v; }
  void write_right(uint32_t v) { reg_r_ = v; }
  uint32_t left_reg() const { return reg_l_; }
  uint32_t right_reg() const { return reg_r_; }

  void set_enabled(bool on) { enabled_ = on; }
  bool enabled() const { return enabled_; }
  bool busy() const { return busy_; }
  bool lrc_seen() const { return lrc_seen_; }
  void clear_lrc_seen() { lrc_seen_ = false; }

  void tick(uint64_t t, const PinState& in, PinState& out) override;

 private:
  uint8_t frame_bit(uint64_t i) const;

  const ClockGen* cg_;
  AudioWordConfig wc_;
  uint64_t div_;
  uint64_t period_;

  bool enabled_ = false;
  bool active_ = false;
  bool busy_ = false;
  bool lrc_seen_ = false;
  uint64_t frame_start_ = 0;
  uint64_t shift_ = 0;  // 2*bit_length bits, left word in the high half
  uint32_t reg_l_ = 0;
  uint32_t reg_r_ = 0;
};

class AdcDeserializer final : public Device {
 public:
  AdcDeserializer(const ClockGen* cg, AudioWordConfig wc);

  uint32_t left_reg() const { return uint32_t(reg_l_); }
  uint32_t right_reg() const { return uint32_t(reg_r_); }

  void set_enabled(bool on) { enabled_ = on; }
  bool enabled() const { return enabled_; }
  bool busy() const { return busy_; }
  bool lrc_seen() const { return lrc_seen_; }
  void clear_lrc_seen() { lrc_seen_ = false; }

  void tick(uint64_t t, const PinState& in, PinState& out) override;

 private:
  const ClockGen* cg_;
  AudioWordConfig wc_;
  uint64_t div_;
  uint64_t period_;

  bool enabled_ = false;
  bool active_ = false;
  bool busy_ = false;
  bool lrc_seen_ = false;
  uint64_t frame_start_ = 0;
  uint64_t acc_ = 0;
  int32_t reg_l_ = 0;
  int32_t reg_r_ = 0;
};

int32_t sign_extend(uint64_t word, uint32_t bit_length);

// Decodes the first complete frame whose LRC rising edge is at or after
// from_tick. The BCLK period is measured from the trace itself. Strict:
// an LRC pulse wider or narrower than one BCLK cycle, or a frame whose
// data cells run past end_tick, is a DecodeError naming the tick.
AudioFrame decode_frame(const PinTrace& bclk, const PinTrace& lrc,
                        const PinTrace& dat, uint32_t bit_length,
                        uint64_t from_tick, uint64_t end_tick);

// All complete frames in a trace. A final frame still in flight at
// end_tick is not an error; it is simply not reported.
std::vector<AudioFrame> decode_frames(const PinTrace& bclk, const PinTrace& lrc,
                                      const PinTrace& dat, uint32_t bit_length,
                                      uint64_t end_tick);

}  // namespace wmsim
