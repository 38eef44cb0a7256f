#pragma once

#include "wmsim/audio_serial.hpp"
#include "wmsim/clockgen.hpp"
#include "wmsim/codec_model.hpp"
#include "wmsim/i2c_master.hpp"
#include "wmsim/registers.hpp"
#include "wmsim/sim.hpp"

namespace wmsim {

struct SystemConfig {
  ClockConfig clock;
  AudioWordConfig word;
  I2cConfig i2c;
  bool trace = false;
};

// Checks every module config plus the cross-module constraints: the frame
// (1 + 2*bit_length BCLK cycles) must fit in one LRC period, and audio
// streaming needs divider >= 4 so the codec's one-tick output delay
// settles before the receiver samples.
void validate(const SystemConfig& cfg);

// The complete rig: clock generator, I2C master, DAC serializer, ADC
// deserializer and the codec model on the other side of the pins, plus
// the register file programs use to talk to the FPGA-side units.
// Device tick order is fixed: clockgen first (it publishes the BCLK edge
// strobes the serializers key off), codec last.
class AudioSystem {
 public:
  explicit AudioSystem(const SystemConfig& cfg);

  Simulator& sim() { return sim_; }
  RegisterFile& bus() { return bus_; }
  ClockGen& clockgen() { return clockgen_; }
  I2cMaster& i2c() { return i2c_; }
  DacSerializer& dac() { return dac_; }
  AdcDeserializer& adc() { return adc_; }
  CodecModel& codec() { return codec_; }

  const SystemConfig& config() const { return cfg_; }
  const Rates& rates() const { return rates_; }

 private:
  SystemConfig cfg_;
  Rates rates_;
  Simulator sim_;
  ClockGen clockgen_;
  I2cMaster i2c_;
  DacSerializer dac_;
  AdcDeserializer adc_;
  CodecModel codec_;
  RegisterFile bus_;
};

}  // namespace wmsim
