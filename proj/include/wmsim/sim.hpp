#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "wmsim/errors.hpp"

namespace wmsim {

// One simulation tick is one period of the 80 MHz system clock (12.5 ns).
inline constexpr uint64_t kSystemFreqHz = 80'000'000;

struct SimClock {
  uint64_t tick_count = 0;
  uint64_t system_freq_hz = kSystemFreqHz;
  double seconds() const { return double(tick_count) / double(system_freq_hz); }
};

// Pin state between the FPGA-side interface and the codec. All pins are
// plain logic levels except sdin, which is open-drain with a pull-up:
// it resolves to 0/1 when exactly one side drives and to Z (reads as 1)
// when released. Both sides driving at once is a fatal simulation error.
struct PinState {
  static constexpr uint8_t kZ = 2;

  uint8_t xclk = 0;
  uint8_t bclk = 0;
  uint8_t dac_lrc = 0;
  uint8_t dac_dat = 0;
  uint8_t adc_lrc = 0;
  uint8_t adc_dat = 0;
  uint8_t sclk = 0;
  uint8_t sdin = kZ;  // resolved level: 0, 1 or kZ

  bool sdin_we_master = false;
  uint8_t sdin_master = 1;
  bool sdin_we_slave = false;
  uint8_t sdin_slave = 1;

  // Bus level as seen by a receiver (pull-up makes a released line read 1).
  uint8_t sdin_level() const { return sdin == kZ ? 1 : sdin; }

  bool operator==(const PinState&) const = default;
};

enum class PinId : int {
  Xclk = 0,
  Bclk,
  DacLrc,
  DacDat,
  AdcLrc,
  AdcDat,
  Sclk,
  Sdin,
  SdinWeMaster,
  SdinWeSlave,
};
inline constexpr int kPinCount = 10;

const char* pin_name(PinId id);

// Run-length encoded history of one pin: (tick, new value) pairs with
// strictly increasing ticks. The first entry is the reset value at tick 0.
struct PinTrace {
  std::vector<std::pair<uint64_t, uint8_t>> changes;

  void append(uint64_t tick, uint8_t value);
  // Value of the most recent change at or before `tick` (kZ if empty).
  uint8_t value_at(uint64_t tick) const;
  bool empty() const { return changes.empty(); }

  bool operator==(const PinTrace&) const = default;
};

class TraceBuffer {
 public:
  // Records the full pin state as a baseline, then per-pin diffs.
  void record(uint64_t tick, const PinState& ps);

  const PinTrace& pin(PinId id) const { return pins_[int(id)]; }
  uint64_t last_tick() const { return last_tick_; }
  bool empty() const { return !any_recorded_; }

  // IEEE 1364 value change dump. Declared timescale is 100 ps and every
  // tick advances time by 125 units, i.e. exactly 12.5 ns per tick.
  void write_vcd(std::ostream& os) const;

  bool operator==(const TraceBuffer&) const = default;

  static constexpr uint64_t kVcdUnitsPerTick = 125;  // 100 ps units

 private:
  std::array<PinTrace, kPinCount> pins_;
  uint64_t last_tick_ = 0;
  bool any_recorded_ = false;
};

// A device observes the pin state from the end of the previous tick and
// writes the pins it owns into `out` (which starts as a copy of `in`).
// `t` is the index of the state being computed: `in` is the state after
// tick t-1 and the values written to `out` become the state after tick t.
class Device {
 public:
  virtual ~Device() = default;
  virtual void tick(uint64_t t, const PinState& in, PinState& out) = 0;
};

class Simulator {
 public:
  Simulator();

  // Devices tick in attachment order. Order is fixed for determinism; the
  // two-phase update makes results independent of it.
  void attach(Device* d);

  void set_trace_enabled(bool on);
  bool trace_enabled() const { return trace_on_; }

  SimClock step(uint64_t n);

  // Steps until pred() returns true, checking once before stepping.
  // Returns the tick count at which the predicate first held.
  uint64_t run_until(const std::function<bool()>& pred, uint64_t max_ticks);

  const PinState& pins() const { return cur_; }
  SimClock clock() const { return {tick_count_, kSystemFreqHz}; }
  uint64_t tick_count() const { return tick_count_; }
  TraceBuffer& trace() { return trace_; }
  const TraceBuffer& trace() const { return trace_; }

 private:
  void step_one();

  std::vector<Device*> devices_;
  PinState cur_;  // reset state: all outputs 0, sdin released
  uint64_t tick_count_ = 0;
  TraceBuffer trace_;
  bool trace_on_ = false;
};

}  // namespace wmsim
