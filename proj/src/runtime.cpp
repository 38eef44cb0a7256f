#include "wmsim/runtime.hpp"

#include <algorithm>
#include <cmath>

#include "wmsim/registers.hpp"

namespace wmsim {

namespace {

constexpr uint32_t kStatusDacBusy = 1u << 0;
constexpr uint32_t kStatusAdcBusy = 1u << 1;
constexpr uint32_t kStatusDacLrc = 1u << 2;
constexpr uint32_t kStatusAdcLrc = 1u << 3;

constexpr uint32_t kI2cBusy = 1u << 0;

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

int volume_code(int db) {
  if (db < -73 || db > 6) {
    throw ConfigError("volume_db out of range [-73, 6]: " + std::to_string(db));
  }
  return db + 121;
}

uint32_t Runtime::read_reg(uint32_t offset) {
  sys_.sim().step(1);
  return sys_.bus().read(offset);
}

void Runtime::write_reg(uint32_t offset, uint32_t value) {
  sys_.sim().step(1);
  sys_.bus().write(offset, value);
}

uint32_t Runtime::poll_status() { return read_reg(reg::STATUS); }

void Runtime::wait_i2c_idle() {
  // A transaction always runs to Stop, nack or not, so busy must clear.
  const uint64_t budget = 2 * sys_.i2c().transaction_ticks() + 16;
  for (uint64_t i = 0; i < budget; ++i) {
    if ((read_reg(reg::I2C_STATUS) & kI2cBusy) == 0) return;
  }
  throw TimeoutError("I2C master still busy after " + std::to_string(budget) +
                     " ticks");
}

void Runtime::submit_command(const I2cCommand& cmd) {
  encode_command(cmd);  // range check before touching the bus
  wait_i2c_idle();
  write_reg(reg::I2C_DATA, (uint32_t(cmd.reg_addr) << 9) | cmd.data);
}

bool Runtime::i2c_nack_seen() {
  return (read_reg(reg::I2C_STATUS) & 2u) != 0;
}

void Runtime::configure_defaults() {
  const uint16_t fmt = format_register_value(sys_.config().word.bit_length);
  const I2cCommand seq[] = {
      {0x0F, 0x000},  // reset
      {0x00, 0x017},  // left line in, 0 dB, unmuted
      {0x01, 0x017},  // right line in
      {0x02, 0x179},  // left headphone out, 0 dB, load both
      {0x03, 0x179},  // right headphone out
      {0x04, 0x012},  // analogue path: DAC selected, mic muted
      {0x05, 0x000},  // digital path: de-emphasis off, DAC unmuted
      {0x06, 0x000},  // power down: everything on
      {0x07, fmt},    // interface format
      {0x08, 0x000},  // sampling: normal mode, 256fs
      {0x09, 0x001},  // activate the interface
  };
  for (const auto& cmd : seq) submit_command(cmd);
  wait_i2c_idle();
}

void Runtime::set_volume(int db) {
  const uint16_t v = uint16_t(0x100 | volume_code(db));  // bit8 loads both
  submit_command({0x02, v});
  submit_command({0x03, v});
  wait_i2c_idle();
}

void Runtime::enable_dac(bool on) { write_reg(reg::DAC_EN, on ? 1u : 0u); }
void Runtime::enable_adc(bool on) { write_reg(reg::ADC_EN, on ? 1u : 0u); }

void Runtime::sync_dac() {
  const uint64_t budget = 4 * sys_.rates().lrc_period_ticks;
  for (uint64_t i = 0; i < budget; ++i) {
    if (poll_status() & kStatusDacLrc) return;
  }
  throw TimeoutError("no DAC frame strobe within " + std::to_string(budget) +
                     " ticks");
}

void Runtime::sync_adc() {
  const uint64_t budget = 4 * sys_.rates().lrc_period_ticks;
  for (uint64_t i = 0; i < budget; ++i) {
    if (poll_status() & kStatusAdcLrc) return;
  }
  throw TimeoutError("no ADC frame strobe within " + std::to_string(budget) +
                     " ticks");
}

void Runtime::wait_dac_ready() {
  const uint64_t budget = 4 * sys_.rates().lrc_period_ticks;
  for (uint64_t i = 0; i < budget; ++i) {
    if ((poll_status() & kStatusDacBusy) == 0) return;
  }
  throw TimeoutError("DAC still busy after " + std::to_string(budget) +
                     " ticks");
}

void Runtime::wait_adc_done() {
  const uint64_t budget = 4 * sys_.rates().lrc_period_ticks;
  for (uint64_t i = 0; i < budget; ++i) {
    if ((poll_status() & kStatusAdcBusy) == 0) return;
  }
  throw TimeoutError("ADC capture still running after " +
                     std::to_string(budget) + " ticks");
}

void Runtime::write_sample(StereoSample s) {
  if (poll_status() & kStatusDacBusy) {
    throw SimulationError("sample write while the DAC frame is in flight",
                          sys_.sim().tick_count());
  }
  write_reg(reg::DAC_L, uint32_t(s.left));
  write_reg(reg::DAC_R, uint32_t(s.right));
}

StereoSample Runtime::read_sample() {
  StereoSample s;
  s.left = int32_t(read_reg(reg::ADC_L));
  s.right = int32_t(read_reg(reg::ADC_R));
  return s;
}

uint64_t Runtime::max_delay_samples() const {
  return uint64_t(sys_.rates().fs_hz);
}

void Runtime::flush_tail() {
  // Enough for the final register write to be latched at the next frame
  // boundary and fully serialized: one LRC period plus one frame window.
  const auto& clk = sys_.config().clock;
  const uint64_t frame_ticks =
      uint64_t(2 * sys_.config().word.bit_length + 2) * clk.divider;
  sys_.sim().step(sys_.rates().lrc_period_ticks + frame_ticks);
}

uint64_t Runtime::run_sine(double freq_hz, double amplitude, uint64_t frames) {
  const double fs = sys_.rates().fs_hz;
  if (!(freq_hz > 0.0) || freq_hz >= fs / 2.0) {
    throw ConfigError("sine frequency must sit in (0, fs/2), fs = " +
                      std::to_string(fs));
  }
  if (!(amplitude >= 0.0) || amplitude > 1.0) {
    throw ConfigError("sine amplitude must sit in [0, 1]");
  }
  const double full = double(sample_max(sys_.config().word.bit_length));
  const double dphase = kTwoPi * freq_hz / fs;

  enable_dac(true);
  double phase = 0.0;
  for (uint64_t k = 0; k < frames; ++k) {
    const auto v = int32_t(std::llround(amplitude * full * std::sin(phase)));
    phase += dphase;
    if (phase >= kTwoPi) phase -= kTwoPi;
    sync_dac();
    wait_dac_ready();
    write_sample({v, v});
  }
  flush_tail();
  return frames;
}

uint64_t Runtime::run_passthrough(uint64_t frames) {
  enable_adc(true);
  enable_dac(true);
  for (uint64_t k = 0; k < frames; ++k) {
    sync_adc();
    wait_adc_done();  // DAC idles on the same schedule, so writes are safe
    write_sample(read_sample());
  }
  flush_tail();
  return frames;
}

uint64_t Runtime::run_delay(const DelayParams& p, uint64_t frames) {
  if (p.delay_samples > max_delay_samples()) {
    throw ConfigError("delay_samples exceeds the one second line (" +
                      std::to_string(max_delay_samples()) + ")");
  }
  if (p.mix_gain_q15 < 0 || p.mix_gain_q15 > 32768) {
    throw ConfigError("mix_gain_q15 out of range [0, 32768]");
  }
  const uint32_t bl = sys_.config().word.bit_length;
  const int64_t lo = sample_min(bl);
  const int64_t hi = sample_max(bl);
  const int64_t g = p.mix_gain_q15;
  auto mix = [&](int32_t x, int32_t xd) {
    const int64_t acc = (g * int64_t(x) + g * int64_t(xd)) >> 15;
    return int32_t(std::clamp(acc, lo, hi));
  };

  std::vector<StereoSample> ring(std::max<uint64_t>(p.delay_samples, 1));
  uint64_t pos = 0;

  enable_adc(true);
  enable_dac(true);
  for (uint64_t k = 0; k < frames; ++k) {
    sync_adc();
    wait_adc_done();
    const StereoSample x = read_sample();
    const StereoSample xd = p.delay_samples == 0 ? x : ring[pos];
    write_sample({mix(x.left, xd.left), mix(x.right, xd.right)});
    ring[pos] = x;
    pos = (pos + 1) % ring.size();
  }
  flush_tail();
  return frames;
}

}  // namespace wmsim
