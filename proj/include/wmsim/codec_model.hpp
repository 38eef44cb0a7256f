#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "wmsim/audio_serial.hpp"
#include "wmsim/i2c_master.hpp"
#include "wmsim/sim.hpp"

namespace wmsim {

// Control registers of the codec: 7-bit addresses 0x00..0x0F, 9-bit values.
// A write to 0x0F resets every register to 0.
struct CodecRegisterFile {
  std::array<uint16_t, 16> regs{};

  void commit(uint8_t addr, uint16_t data);
  uint16_t read(uint8_t addr) const { return addr < regs.size() ? regs[addr] : 0; }
};

// One bus transaction reconstructed from a trace.
struct I2cTransaction {
  uint64_t start_tick = 0;
  uint64_t stop_tick = 0;
  uint8_t addr_byte = 0;
  std::vector<uint8_t> payload;  // bytes after the address byte
  std::vector<bool> acks;        // one per byte, address byte first
  uint32_t bit_clocks = 0;       // rising edges that sampled data or ack bits
  bool well_formed = false;
};

// Decodes every start..stop window in the sclk/sdin traces. A transaction
// is well formed when the sampled bits split into whole 9-bit byte+ack
// cells plus the single low preamble bit of the stop sequence.
std::vector<I2cTransaction> decode_i2c(const PinTrace& sclk, const PinTrace& sdin,
                                       uint64_t end_tick);

// Behavioral model of the codec chip.
//
// Control port: an I2C slave that samples SDIN on SCLK rising edges,
// recognizes start/stop conditions while SCLK is high, acks the three
// bytes of a write addressed to it (address byte, then {reg, data[8]},
// then data[7:0]), and commits the register write after the third byte.
// Traffic for any other chip address is ignored without acks. Every
// committed write also lands in an ordered write log.
//
// Audio port (slave mode, all clocks from the FPGA): on each ADC LRC pulse
// the next stimulus sample is serialized onto adc_dat, shifting on BCLK
// falling edges (the line moves one tick after the edge, like a chip
// clocked by BCLK). When the stimulus runs out it emits zeros and raises
// a flag. DAC frames are captured by recording the dac pins over each
// frame window and running decode_frame on it when the window closes.
//
// Stored control registers do not reshape the audio path; the interface
// format register is only cross-checked against the configured word
// length by format_register_bit_length().
class CodecModel final : public Device {
 public:
  CodecModel(AudioWordConfig wc, I2cConfig i2c);

  void drive_adc_from(const std::vector<StereoSample>& stimulus,
                      uint32_t stimulus_bit_length);
  bool stimulus_exhausted() const { return stim_exhausted_; }
  uint64_t stimulus_consumed() const { return stim_pos_; }

  // Complete DAC frames decoded so far, in order.
  const std::vector<StereoSample>& capture_dac() const { return capture_; }
  const std::vector<AudioFrame>& capture_frames() const { return frames_; }

  const CodecRegisterFile& regs() const { return regs_; }
  const std::vector<std::pair<uint8_t, uint16_t>>& write_log() const {
    return write_log_;
  }

  void tick(uint64_t t, const PinState& in, PinState& out) override;

 private:
  void i2c_tick(const PinState& in);
  void audio_tick(uint64_t t, const PinState& in, PinState& out);

  AudioWordConfig wc_;
  uint8_t my_addr_byte_;

  // i2c slave
  enum class Bus { Idle, Byte, AckDrive, Ignore };
  Bus bus_ = Bus::Idle;
  uint8_t shift_ = 0;
  uint8_t bit_count_ = 0;
  uint8_t byte_index_ = 0;
  bool byte_done_ = false;
  std::array<uint8_t, 3> bytes_{};
  bool driving_ack_ = false;
  CodecRegisterFile regs_;
  std::vector<std::pair<uint8_t, uint16_t>> write_log_;

  // adc stimulus
  std::vector<StereoSample> stim_;
  size_t stim_pos_ = 0;
  bool stim_exhausted_ = false;
  bool adc_active_ = false;
  uint64_t adc_shift_ = 0;
  uint64_t adc_cell_ = 0;

  // dac capture
  bool win_active_ = false;
  uint64_t win_start_ = 0;
  uint64_t win_falls_ = 0;
  PinTrace win_bclk_, win_lrc_, win_dat_;
  std::vector<StereoSample> capture_;
  std::vector<AudioFrame> frames_;

  PinState prev_;
};

// Word length encoded in the interface format register (IWL field),
// for cross-checks against the FPGA-side configuration.
uint32_t format_register_bit_length(const CodecRegisterFile& regs);

// Interface format register value for DSP mode A at the given word length.
uint16_t format_register_value(uint32_t bit_length);

}  // namespace wmsim
