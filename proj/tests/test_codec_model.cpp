#include <doctest.h>

#include "test_util.hpp"
#include "wmsim/codec_model.hpp"
#include "wmsim/i2c_master.hpp"

using namespace wmsim;

namespace {

// Builds SCLK/SDIN traces for one write transaction, bit by bit, with a
// 20 tick cell. This is an independent waveform generator: the decoder is
// checked against it rather than against the bus master.
struct WireBuilder {
  PinTrace sclk, sdin;
  uint64_t t = 0;

  WireBuilder() {
    sclk.append(0, 1);
    sdin.append(0, PinState::kZ);  // released line reads 1
    t = 5;
  }

  void start() {
    sdin.append(t, 0);  // falls while SCLK is high
    sclk.append(t + 5, 0);
    t += 5;
  }

  void clock_bit(uint8_t b) {
    sdin.append(t + 5, b);   // moves in the low half
    sclk.append(t + 10, 1);  // sampled here
    sclk.append(t + 20, 0);
    t += 20;
  }

  void stop() {
    // Hold the line low through one more clock pulse (the sampled stop
    // preamble bit), then release it while SCLK is high.
    sdin.append(t + 5, 0);
    sclk.append(t + 10, 1);
    sdin.append(t + 15, 1);
    t += 15;
  }

  void clock_byte(uint8_t byte, uint8_t ack_bit) {
    for (int i = 7; i >= 0; --i) clock_bit(uint8_t((byte >> i) & 1));
    clock_bit(ack_bit);
  }
};

}  // namespace

TEST_CASE("register file commit, out of range reads, reset register") {
  CodecRegisterFile rf;
  rf.commit(0x02, 0x17F);
  rf.commit(0x07, 0x003);
  CHECK(rf.read(0x02) == 0x17F);
  CHECK(rf.read(0x07) == 0x003);
  CHECK(rf.read(0x40) == 0);  // out of range reads as zero

  rf.commit(0x0F, 0x1FF);  // any value written to 0x0F wipes the file
  for (uint8_t a = 0; a < 16; ++a) CHECK(rf.read(a) == 0);
}

TEST_CASE("format register value and round trip of the word length") {
  CHECK(format_register_value(16) == 0x003);
  CHECK(format_register_value(20) == 0x007);
  CHECK(format_register_value(24) == 0x00B);
  CHECK(format_register_value(32) == 0x00F);

  CodecRegisterFile rf;
  for (uint32_t bl : {16u, 20u, 24u, 32u}) {
    rf.commit(0x07, format_register_value(bl));
    CHECK(format_register_bit_length(rf) == bl);
  }
}

TEST_CASE("i2c decoder on hand built waveforms") {
  SUBCASE("clean three byte write, all acked") {
    WireBuilder w;
    w.start();
    w.clock_byte(0x34, 0);
    w.clock_byte(0x0F, 0);
    w.clock_byte(0xAB, 0);
    w.stop();

    const auto txns = decode_i2c(w.sclk, w.sdin, w.t + 10);
    REQUIRE(txns.size() == 1);
    const auto& x = txns[0];
    CHECK(x.well_formed);
    CHECK(x.start_tick == 5);
    CHECK(x.addr_byte == 0x34);
    REQUIRE(x.payload.size() == 2);
    CHECK(x.payload[0] == 0x0F);
    CHECK(x.payload[1] == 0xAB);
    REQUIRE(x.acks.size() == 3);
    CHECK(x.acks[0]);
    CHECK(x.acks[1]);
    CHECK(x.acks[2]);
    CHECK(x.bit_clocks == 27);
  }

  SUBCASE("single byte with a nack is still well formed") {
    WireBuilder w;
    w.start();
    w.clock_byte(0x36, 1);  // nobody pulls the ack low
    w.stop();

    const auto txns = decode_i2c(w.sclk, w.sdin, w.t + 10);
    REQUIRE(txns.size() == 1);
    CHECK(txns[0].well_formed);
    CHECK(txns[0].addr_byte == 0x36);
    CHECK(txns[0].payload.empty());
    REQUIRE(txns[0].acks.size() == 1);
    CHECK_FALSE(txns[0].acks[0]);
    CHECK(txns[0].bit_clocks == 9);
  }

  SUBCASE("stop in the middle of a byte is malformed") {
    WireBuilder w;
    w.start();
    for (int i = 0; i < 5; ++i) w.clock_bit(1);
    w.stop();

    const auto txns = decode_i2c(w.sclk, w.sdin, w.t + 10);
    REQUIRE(txns.size() == 1);
    CHECK_FALSE(txns[0].well_formed);
  }

  SUBCASE("trace that ends mid transaction is malformed") {
    WireBuilder w;
    w.start();
    w.clock_bit(1);
    w.clock_bit(0);
    w.clock_bit(1);

    const auto txns = decode_i2c(w.sclk, w.sdin, w.t + 10);
    REQUIRE(txns.size() == 1);
    CHECK_FALSE(txns[0].well_formed);
    CHECK(txns[0].bit_clocks == 3);
  }

  SUBCASE("quiet bus decodes to nothing") {
    PinTrace sclk, sdin;
    sclk.append(0, 1);
    sdin.append(0, PinState::kZ);
    CHECK(decode_i2c(sclk, sdin, 1000).empty());
  }
}

TEST_CASE("codec slave ignores traffic for another chip address") {
  Simulator sim;
  I2cMaster master(I2cConfig{200'000, 0x1B});
  CodecModel codec(AudioWordConfig{16}, I2cConfig{});  // listens on 0x1A
  sim.attach(&master);
  sim.attach(&codec);
  sim.set_trace_enabled(true);

  REQUIRE(master.submit({0x02, 0x17F}));
  sim.run_until([&] { return !master.busy(); }, 100'000);

  CHECK(master.nack_latched());
  CHECK(codec.write_log().empty());
  for (uint8_t a = 0; a < 16; ++a) CHECK(codec.regs().read(a) == 0);

  // The wire itself shows a well formed but unacked transaction.
  const auto txns = decode_i2c(sim.trace().pin(PinId::Sclk),
                               sim.trace().pin(PinId::Sdin), sim.tick_count());
  REQUIRE(txns.size() == 1);
  CHECK(txns[0].well_formed);
  CHECK(txns[0].addr_byte == 0x36);
  CHECK_FALSE(txns[0].acks[0]);
}

TEST_CASE("codec serializes adc stimulus and flags exhaustion") {
  Simulator sim;
  ClockGen cg(ClockConfig{6, 256});
  AdcDeserializer adc(&cg, AudioWordConfig{16});
  CodecModel codec(AudioWordConfig{16}, I2cConfig{});
  sim.attach(&cg);
  sim.attach(&adc);
  sim.attach(&codec);

  codec.drive_adc_from({{1000, -2000}, {32767, -32768}}, 16);
  adc.set_enabled(true);

  sim.step(1536 + 198);  // first frame committed
  CHECK(int32_t(adc.left_reg()) == 1000);
  CHECK(int32_t(adc.right_reg()) == -2000);
  CHECK(codec.stimulus_consumed() == 1);
  CHECK_FALSE(codec.stimulus_exhausted());

  sim.step(1536);  // second frame committed
  CHECK(int32_t(adc.left_reg()) == 32767);
  CHECK(int32_t(adc.right_reg()) == -32768);
  CHECK(codec.stimulus_consumed() == 2);

  sim.step(1536);  // third frame starts with nothing left: zeros plus a flag
  CHECK(codec.stimulus_exhausted());
  CHECK(int32_t(adc.left_reg()) == 0);
  CHECK(int32_t(adc.right_reg()) == 0);
}

TEST_CASE("codec captures dac frames it hears on the wire") {
  Simulator sim;
  ClockGen cg(ClockConfig{6, 256});
  DacSerializer dac(&cg, AudioWordConfig{16});
  CodecModel codec(AudioWordConfig{16}, I2cConfig{});
  sim.attach(&cg);
  sim.attach(&dac);
  sim.attach(&codec);

  dac.set_enabled(true);
  dac.write_left(uint32_t(123));
  dac.write_right(uint32_t(int32_t(-456)) & 0xFFFF);
  sim.step(2 * 1536);

  REQUIRE(codec.capture_dac().size() >= 1);
  CHECK(codec.capture_dac()[0] == StereoSample{123, -456});
  REQUIRE(codec.capture_frames().size() >= 1);
  CHECK(codec.capture_frames()[0].lrc_tick == 1536);
}

TEST_CASE("codec capture at 24 bit carries full scale samples") {
  Simulator sim;
  ClockGen cg(ClockConfig{6, 256});
  DacSerializer dac(&cg, AudioWordConfig{24});
  CodecModel codec(AudioWordConfig{24}, I2cConfig{});
  sim.attach(&cg);
  sim.attach(&dac);
  sim.attach(&codec);

  dac.set_enabled(true);
  dac.write_left(uint32_t(8388607));
  dac.write_right(uint32_t(int32_t(-8388608)) & 0xFFFFFF);
  sim.step(2 * 1536);

  REQUIRE(codec.capture_dac().size() >= 1);
  CHECK(codec.capture_dac()[0] == StereoSample{8388607, -8388608});
}
