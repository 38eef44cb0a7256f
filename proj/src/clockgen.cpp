#include "wmsim/clockgen.hpp"

#include <string>

namespace wmsim {

void validate(const ClockConfig& cfg) {
  if (cfg.divider < 2) {
    throw ConfigError("clock.divider: must be >= 2, got " + std::to_string(cfg.divider));
  }
  if (cfg.divider % 2 != 0) {
    throw ConfigError("clock.divider: must be even, got " + std::to_string(cfg.divider));
  }
  if (cfg.fs_divider < 1) {
    throw ConfigError("clock.fs_divider: must be >= 1");
  }
}

Rates derive_rates(const ClockConfig& cfg) {
  validate(cfg);
  Rates r;
  r.bclk_hz = double(kSystemFreqHz) / double(cfg.divider);
  r.lrc_period_ticks = uint64_t(cfg.divider) * cfg.fs_divider;
  r.fs_hz = double(kSystemFreqHz) / double(r.lrc_period_ticks);
  return r;
}

ClockGen::ClockGen(ClockConfig cfg) : cfg_(cfg), half_(cfg.divider / 2) {
  validate(cfg_);
}

void ClockGen::tick(uint64_t t, const PinState&, PinState& out) {
  const uint8_t lvl = level(t);
  out.bclk = lvl;
  out.xclk = lvl;
  const uint64_t phase = t % cfg_.divider;
  rising_ = phase == half_;
  falling_ = phase == 0;
}

}  // namespace wmsim
