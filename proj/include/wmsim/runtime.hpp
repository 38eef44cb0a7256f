#pragma once

#include <cstdint>
#include <vector>

#include "wmsim/system.hpp"

namespace wmsim {

// Headphone volume mapping: 1 dB steps, -73 dB (min, then mute) .. +6 dB,
// register code = db + 121. Out of range is a ConfigError.
int volume_code(int db);

struct DelayParams {
  uint64_t delay_samples = 13021;
  int32_t mix_gain_q15 = 16384;  // applied to both the dry and delayed taps
};

// The program side of the rig. Every register access costs one simulator
// tick, like a CPU polling a memory mapped bus; there are no backdoor pokes
// into the devices. Experiments run one frame per loop iteration: wait for
// the frame strobe, wait for the shifter to go idle, then exchange samples.
class Runtime {
 public:
  explicit Runtime(AudioSystem& sys) : sys_(sys) {}

  // One tick passes, then the access happens.
  uint32_t read_reg(uint32_t offset);
  void write_reg(uint32_t offset, uint32_t value);

  // Control port. submit_command blocks until the master can take the
  // command; wait_i2c_idle blocks until the bus transaction finishes.
  void submit_command(const I2cCommand& cmd);
  void wait_i2c_idle();
  bool i2c_nack_seen();  // reads I2C_STATUS, true if the sticky nack is set

  // Full codec bring-up: reset, line inputs at 0 dB, headphone outputs at
  // 0 dB, DAC selected, mic muted, digital path unmuted, all blocks
  // powered, interface format matching the configured word length,
  // normal 256fs sampling, interface activated.
  void configure_defaults();
  void set_volume(int db);

  void enable_dac(bool on);
  void enable_adc(bool on);

  // Block until the next frame boundary strobe (sticky LRC-seen bit).
  void sync_dac();
  void sync_adc();

  // write_sample refuses to race an in-flight frame; call it only when
  // the DAC shifter is idle (after wait_dac_ready or an ADC done wait).
  void write_sample(StereoSample s);
  StereoSample read_sample();
  void wait_dac_ready();
  void wait_adc_done();

  // Experiments. Each processes exactly `frames` samples, then runs the
  // simulator long enough for the last written sample to leave the pins.
  // A sample written during frame k is serialized during frame k+1, so
  // the codec's capture starts with one zero sample.
  uint64_t run_sine(double freq_hz, double amplitude, uint64_t frames);
  uint64_t run_passthrough(uint64_t frames);
  uint64_t run_delay(const DelayParams& p, uint64_t frames);

  // One second of samples at the configured rate, the delay line capacity.
  uint64_t max_delay_samples() const;

 private:
  void flush_tail();
  uint32_t poll_status();

  AudioSystem& sys_;
};

}  // namespace wmsim
