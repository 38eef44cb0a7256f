#include "wmsim/sim.hpp"

#include <algorithm>
#include <string>

namespace wmsim {

const char* pin_name(PinId id) {
  switch (id) {
    case PinId::Xclk: return "xclk";
    case PinId::Bclk: return "bclk";
    case PinId::DacLrc: return "dac_lrc";
    case PinId::DacDat: return "dac_dat";
    case PinId::AdcLrc: return "adc_lrc";
    case PinId::AdcDat: return "adc_dat";
    case PinId::Sclk: return "sclk";
    case PinId::Sdin: return "sdin";
    case PinId::SdinWeMaster: return "sdin_we_master";
    case PinId::SdinWeSlave: return "sdin_we_slave";
  }
  return "?";
}

void PinTrace::append(uint64_t tick, uint8_t value) {
  if (!changes.empty()) {
    if (tick == changes.back().first) {  // same-tick rewrite: last value wins
      changes.back().second = value;
      return;
    }
    if (changes.back().second == value) return;
  }
  changes.emplace_back(tick, value);
}

uint8_t PinTrace::value_at(uint64_t tick) const {
  if (changes.empty()) return PinState::kZ;
  auto it = std::upper_bound(
      changes.begin(), changes.end(), tick,
      [](uint64_t t, const std::pair<uint64_t, uint8_t>& c) { return t < c.first; });
  if (it == changes.begin()) return PinState::kZ;
  return std::prev(it)->second;
}

static std::array<uint8_t, kPinCount> flatten(const PinState& ps) {
  return {ps.xclk,
          ps.bclk,
          ps.dac_lrc,
          ps.dac_dat,
          ps.adc_lrc,
          ps.adc_dat,
          ps.sclk,
          ps.sdin,
          uint8_t(ps.sdin_we_master ? 1 : 0),
          uint8_t(ps.sdin_we_slave ? 1 : 0)};
}

void TraceBuffer::record(uint64_t tick, const PinState& ps) {
  auto vals = flatten(ps);
  for (int i = 0; i < kPinCount; ++i) {
    if (!any_recorded_ || pins_[i].changes.empty() ||
        pins_[i].changes.back().second != vals[i]) {
      pins_[i].changes.emplace_back(tick, vals[i]);
    }
  }
  last_tick_ = tick;
  any_recorded_ = true;
}

Simulator::Simulator() = default;

void Simulator::attach(Device* d) { devices_.push_back(d); }

void Simulator::set_trace_enabled(bool on) {
  if (on && !trace_on_) trace_.record(tick_count_, cur_);
  trace_on_ = on;
}

void Simulator::step_one() {
  PinState next = cur_;
  const uint64_t t = tick_count_ + 1;
  for (Device* d : devices_) d->tick(t, cur_, next);
  if (next.sdin_we_master && next.sdin_we_slave) {
    throw SimulationError("sdin bus contention at tick " + std::to_string(t), t);
  }
  next.sdin = next.sdin_we_master ? next.sdin_master
            : next.sdin_we_slave ? next.sdin_slave
                                 : PinState::kZ;
  cur_ = next;
  tick_count_ = t;
  if (trace_on_) trace_.record(t, cur_);
}

SimClock Simulator::step(uint64_t n) {
  for (uint64_t i = 0; i < n; ++i) step_one();
  return clock();
}

uint64_t Simulator::run_until(const std::function<bool()>& pred, uint64_t max_ticks) {
  if (max_ticks == 0) throw ConfigError("run_until: max_ticks must be > 0");
  if (pred()) return tick_count_;
  for (uint64_t i = 0; i < max_ticks; ++i) {
    step_one();
    if (pred()) return tick_count_;
  }
  throw TimeoutError("run_until: predicate not satisfied within " +
                     std::to_string(max_ticks) + " ticks");
}

}  // namespace wmsim
