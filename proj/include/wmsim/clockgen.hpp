#pragma once

#include <cstdint>

#include "wmsim/sim.hpp"

namespace wmsim {

// divider: system ticks per BCLK period. Must be even and >= 2 so both
// half-periods are whole ticks. fs_divider: BCLK periods per audio frame.
struct ClockConfig {
  uint32_t divider = 6;
  uint32_t fs_divider = 256;
};

struct Rates {
  double bclk_hz = 0.0;
  double fs_hz = 0.0;
  uint64_t lrc_period_ticks = 0;
};

void validate(const ClockConfig& cfg);
Rates derive_rates(const ClockConfig& cfg);

// Divides the 80 MHz system clock down to BCLK. XCLK carries the same
// divided waveform, matching a codec run in USB/slave mode from one MCLK.
// BCLK starts low out of reset and first rises after divider/2 ticks.
//
// Peers on the FPGA side key their shifting off bclk_rising()/bclk_falling(),
// the clock-enable view of the edge being produced this tick. That makes
// their outputs move on the same system-clock edge as BCLK itself, the way
// a synchronous design built around clock enables behaves.
class ClockGen final : public Device {
 public:
  explicit ClockGen(ClockConfig cfg);

  void tick(uint64_t t, const PinState& in, PinState& out) override;

  // Valid during and after the tick that computes the edge.
  bool bclk_rising() const { return rising_; }
  bool bclk_falling() const { return falling_; }

  const ClockConfig& config() const { return cfg_; }
  uint8_t level(uint64_t t) const { return uint8_t((t / half_) & 1); }

 private:
  ClockConfig cfg_;
  uint64_t half_;
  bool rising_ = false;
  bool falling_ = false;
};

}  // namespace wmsim
