#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "wmsim/registers.hpp"
#include "wmsim/runtime.hpp"

using namespace wmsim;

namespace {

AudioSystem make_system(uint32_t bit_length = 16) {
  SystemConfig cfg;
  cfg.word.bit_length = bit_length;
  return AudioSystem(cfg);
}

}  // namespace

TEST_CASE("volume codes: frozen anchor points, monotone, range checked") {
  CHECK(volume_code(-73) == 48);
  CHECK(volume_code(0) == 121);
  CHECK(volume_code(6) == 127);
  for (int db = -72; db <= 6; ++db) CHECK(volume_code(db) == volume_code(db - 1) + 1);
  CHECK_THROWS_WITH_AS(volume_code(-74), "volume_db out of range [-73, 6]: -74",
                       ConfigError);
  CHECK_THROWS_AS(volume_code(7), ConfigError);
}

TEST_CASE("register map plumbing: echo registers and access errors") {
  AudioSystem sys = make_system();
  Runtime rt(sys);

  rt.write_reg(reg::DAC_L, 0x1234);
  rt.write_reg(reg::DAC_R, uint32_t(int32_t(-77)));
  CHECK(rt.read_reg(reg::DAC_L) == 0x1234);
  CHECK(int32_t(rt.read_reg(reg::DAC_R)) == -77);

  CHECK_THROWS_AS(rt.read_reg(0x24), Error);  // past the map
  CHECK_THROWS_AS(rt.read_reg(0x02), Error);  // misaligned
  CHECK_THROWS_AS(rt.write_reg(reg::STATUS, 1), Error);  // read only
  CHECK_THROWS_AS(rt.read_reg(reg::I2C_DATA), Error);    // write only
}

TEST_CASE("register access advances time by one tick") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  const uint64_t t0 = sys.sim().tick_count();
  (void)rt.read_reg(reg::STATUS);
  CHECK(sys.sim().tick_count() == t0 + 1);
  rt.write_reg(reg::DAC_L, 0);
  CHECK(sys.sim().tick_count() == t0 + 2);
}

TEST_CASE("bring up writes the full register sequence over the wire") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  rt.configure_defaults();

  const std::vector<std::pair<uint8_t, uint16_t>> expected = {
      {0x0F, 0x000}, {0x00, 0x017}, {0x01, 0x017}, {0x02, 0x179},
      {0x03, 0x179}, {0x04, 0x012}, {0x05, 0x000}, {0x06, 0x000},
      {0x07, 0x003}, {0x08, 0x000}, {0x09, 0x001},
  };
  CHECK(sys.codec().write_log() == expected);
  CHECK(sys.i2c().transaction_count() == 11);
  CHECK(sys.i2c().nack_count() == 0);
  CHECK_FALSE(rt.i2c_nack_seen());
  CHECK(format_register_bit_length(sys.codec().regs()) == 16);
  CHECK(sys.codec().regs().read(0x09) == 1);
}

TEST_CASE("bring up encodes the word length into the format register") {
  AudioSystem sys = make_system(24);
  Runtime rt(sys);
  rt.configure_defaults();
  CHECK(sys.codec().regs().read(0x07) == 0x00B);
  CHECK(format_register_bit_length(sys.codec().regs()) == 24);
}

TEST_CASE("set_volume loads both headphone registers") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  rt.set_volume(-10);
  CHECK(sys.codec().regs().read(0x02) == 0x16F);
  CHECK(sys.codec().regs().read(0x03) == 0x16F);
  const auto& log = sys.codec().write_log();
  REQUIRE(log.size() == 2);
  CHECK(log[0] == std::pair<uint8_t, uint16_t>{0x02, 0x16F});
  CHECK(log[1] == std::pair<uint8_t, uint16_t>{0x03, 0x16F});
  CHECK_THROWS_AS(rt.set_volume(9), ConfigError);
}

TEST_CASE("command register ignores a submit while the master is busy") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  rt.write_reg(reg::I2C_DATA, (uint32_t(0x02) << 9) | 0x17F);
  rt.write_reg(reg::I2C_DATA, (uint32_t(0x03) << 9) | 0x100);  // dropped
  rt.wait_i2c_idle();

  CHECK(sys.i2c().transaction_count() == 1);
  REQUIRE(sys.codec().write_log().size() == 1);
  CHECK(sys.codec().write_log()[0] ==
        std::pair<uint8_t, uint16_t>{0x02, 0x17F});

  rt.submit_command({0x03, 0x100});  // waits for idle first, so it lands
  rt.wait_i2c_idle();
  CHECK(sys.i2c().transaction_count() == 2);
  CHECK(sys.codec().regs().read(0x03) == 0x100);
}

TEST_CASE("status register: sticky frame strobes clear on read") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  rt.enable_dac(true);
  rt.enable_adc(true);
  sys.sim().step(1600);  // cross the first frame boundary without reading

  const uint32_t s1 = rt.read_reg(reg::STATUS);
  CHECK((s1 & 0xC) == 0xC);  // both pulses latched
  CHECK((s1 & 0x3) == 0x3);  // and both units are mid frame
  const uint32_t s2 = rt.read_reg(reg::STATUS);
  CHECK((s2 & 0xC) == 0);  // seen bits consumed by the previous read
}

TEST_CASE("write_sample refuses to race the serializer") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  rt.enable_dac(true);
  rt.sync_dac();  // inside the frame window now, DAC busy
  CHECK_THROWS_AS(rt.write_sample({1, 1}), SimulationError);

  rt.wait_dac_ready();
  CHECK_NOTHROW(rt.write_sample({1, 1}));
}

TEST_CASE("sync_dac times out when the serializer is disabled") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  CHECK_THROWS_AS(rt.sync_dac(), TimeoutError);
  CHECK_THROWS_AS(rt.sync_adc(), TimeoutError);
}

TEST_CASE("run_sine matches an independent sample oracle, one frame late") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  const uint64_t n = 64;
  rt.run_sine(1000.0, 0.5, n);

  const auto& cap = sys.codec().capture_dac();
  REQUIRE(cap.size() >= n + 1);
  CHECK(cap[0] == StereoSample{0, 0});

  const double two_pi = 6.283185307179586476925286766559;
  const double dphase = two_pi * 1000.0 / sys.rates().fs_hz;
  double phase = 0.0;
  for (uint64_t k = 0; k < n; ++k) {
    const auto v = int32_t(std::llround(0.5 * 32767.0 * std::sin(phase)));
    phase += dphase;
    if (phase >= two_pi) phase -= two_pi;
    CHECK(cap[k + 1] == StereoSample{v, v});
  }
}

TEST_CASE("run_sine validates frequency and amplitude") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  const double fs = sys.rates().fs_hz;
  CHECK_THROWS_AS(rt.run_sine(fs / 2.0, 0.5, 4), ConfigError);
  CHECK_THROWS_AS(rt.run_sine(0.0, 0.5, 4), ConfigError);
  CHECK_THROWS_AS(rt.run_sine(440.0, 1.5, 4), ConfigError);
  CHECK_THROWS_AS(rt.run_sine(440.0, -0.1, 4), ConfigError);
}

TEST_CASE("run_passthrough echoes the stimulus one sample late") {
  AudioSystem sys = make_system();
  Runtime rt(sys);

  std::mt19937 rng(1234);
  std::uniform_int_distribution<int32_t> dist(-32768, 32767);
  std::vector<StereoSample> stim(100);
  for (auto& s : stim) s = {dist(rng), dist(rng)};
  sys.codec().drive_adc_from(stim, 16);

  rt.run_passthrough(stim.size());
  const auto& cap = sys.codec().capture_dac();
  REQUIRE(cap.size() >= stim.size() + 1);
  CHECK(cap[0] == StereoSample{0, 0});
  for (size_t k = 0; k < stim.size(); ++k) CHECK(cap[k + 1] == stim[k]);
  CHECK(sys.codec().stimulus_consumed() == stim.size());
}

TEST_CASE("run_delay matches the convolution reference") {
  AudioSystem sys = make_system();
  Runtime rt(sys);

  std::vector<StereoSample> stim(12);
  stim[0] = {16000, -16000};
  sys.codec().drive_adc_from(stim, 16);

  rt.run_delay({4, 16384}, stim.size());
  const auto& cap = sys.codec().capture_dac();
  REQUIRE(cap.size() >= stim.size() + 1);

  std::vector<int32_t> xl(stim.size()), xr(stim.size());
  for (size_t i = 0; i < stim.size(); ++i) {
    xl[i] = stim[i].left;
    xr[i] = stim[i].right;
  }
  const auto yl = testutil::delay_reference(xl, 4, 16384, -32768, 32767);
  const auto yr = testutil::delay_reference(xr, 4, 16384, -32768, 32767);
  CHECK(cap[0] == StereoSample{0, 0});
  for (size_t k = 0; k < stim.size(); ++k) {
    CHECK(cap[k + 1] == StereoSample{yl[k], yr[k]});
  }
  CHECK(cap[1] == StereoSample{8000, -8000});
  CHECK(cap[5] == StereoSample{8000, -8000});
}

TEST_CASE("run_delay with zero delay and unity mix is the identity") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  std::vector<StereoSample> stim = {{5, -5}, {32767, -32768}, {0, 0}, {-1, 1}};
  sys.codec().drive_adc_from(stim, 16);

  rt.run_delay({0, 16384}, stim.size());
  const auto& cap = sys.codec().capture_dac();
  REQUIRE(cap.size() >= stim.size() + 1);
  for (size_t k = 0; k < stim.size(); ++k) CHECK(cap[k + 1] == stim[k]);
}

TEST_CASE("run_delay saturates the mix instead of wrapping") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  // Full gain doubles the sample; full scale input must clamp.
  std::vector<StereoSample> stim = {{32767, -32768}, {100, -100}};
  sys.codec().drive_adc_from(stim, 16);

  rt.run_delay({0, 32768}, stim.size());
  const auto& cap = sys.codec().capture_dac();
  REQUIRE(cap.size() >= 3);
  CHECK(cap[1] == StereoSample{32767, -32768});  // clamped, not wrapped
  CHECK(cap[2] == StereoSample{200, -200});
}

TEST_CASE("delay line bounds") {
  AudioSystem sys = make_system();
  Runtime rt(sys);
  CHECK(rt.max_delay_samples() == 52083);
  CHECK(DelayParams{}.delay_samples == 13021);
  CHECK(DelayParams{}.mix_gain_q15 == 16384);
  CHECK_THROWS_AS(rt.run_delay({52084, 16384}, 1), ConfigError);
  CHECK_THROWS_AS(rt.run_delay({4, 40000}, 1), ConfigError);
}
