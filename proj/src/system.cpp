#include "wmsim/system.hpp"

#include <string>

namespace wmsim {

void validate(const SystemConfig& cfg) {
  validate(cfg.clock);
  validate(cfg.word);
  validate(cfg.i2c);
  if (2ull * cfg.word.bit_length + 1 > cfg.clock.fs_divider) {
    throw ConfigError("audio.bit_length: frame of " +
                      std::to_string(2 * cfg.word.bit_length + 1) +
                      " BCLK cycles does not fit in fs_divider " +
                      std::to_string(cfg.clock.fs_divider));
  }
  if (cfg.clock.divider < 4) {
    throw ConfigError(
        "clock.divider: audio streaming needs >= 4 so codec output settles "
        "before the sampling edge");
  }
}

static Rates checked_rates(const SystemConfig& cfg) {
  validate(cfg);
  return derive_rates(cfg.clock);
}

AudioSystem::AudioSystem(const SystemConfig& cfg)
    : cfg_(cfg),
      rates_(checked_rates(cfg)),
      clockgen_(cfg.clock),
      i2c_(cfg.i2c),
      dac_(&clockgen_, cfg.word),
      adc_(&clockgen_, cfg.word),
      codec_(cfg.word, cfg.i2c) {
  sim_.attach(&clockgen_);
  sim_.attach(&i2c_);
  sim_.attach(&dac_);
  sim_.attach(&adc_);
  sim_.attach(&codec_);
  sim_.set_trace_enabled(cfg.trace);

  bus_.map(
      reg::DAC_L, [this] { return dac_.left_reg(); },
      [this](uint32_t v) { dac_.write_left(v); });
  bus_.map(
      reg::DAC_R, [this] { return dac_.right_reg(); },
      [this](uint32_t v) { dac_.write_right(v); });
  bus_.map(
      reg::DAC_EN, [this] { return dac_.enabled() ? 1u : 0u; },
      [this](uint32_t v) { dac_.set_enabled(v & 1); });
  bus_.map(
      reg::ADC_L, [this] { return adc_.left_reg(); }, nullptr);
  bus_.map(
      reg::ADC_R, [this] { return adc_.right_reg(); }, nullptr);
  bus_.map(
      reg::ADC_EN, [this] { return adc_.enabled() ? 1u : 0u; },
      [this](uint32_t v) { adc_.set_enabled(v & 1); });
  bus_.map(
      reg::STATUS,
      [this] {
        uint32_t s = (dac_.busy() ? 1u : 0u) | (adc_.busy() ? 2u : 0u) |
                     (dac_.lrc_seen() ? 4u : 0u) | (adc_.lrc_seen() ? 8u : 0u);
        dac_.clear_lrc_seen();
        adc_.clear_lrc_seen();
        return s;
      },
      nullptr);
  bus_.map(reg::I2C_DATA, nullptr, [this](uint32_t v) {
    // Ignored while busy; callers poll I2C_STATUS first.
    i2c_.submit({uint8_t((v >> 9) & 0x7F), uint16_t(v & 0x1FF)});
  });
  bus_.map(
      reg::I2C_STATUS, [this] { return i2c_.status_word(); },
      [this](uint32_t) { i2c_.clear_nack(); });
}

}  // namespace wmsim
