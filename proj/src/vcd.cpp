#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

#include "wmsim/sim.hpp"

namespace wmsim {

static char value_char(uint8_t v) {
  switch (v) {
    case 0: return '0';
    case 1: return '1';
    default: return 'z';
  }
}

// Single-character identifiers starting at '!' (33); 10 pins fit comfortably.
static char vcd_id(int pin) { return char('!' + pin); }

void TraceBuffer::write_vcd(std::ostream& os) const {
  os << "$version wmsim $end\n";
  os << "$timescale 100 ps $end\n";
  os << "$scope module audio_if $end\n";
  for (int i = 0; i < kPinCount; ++i) {
    os << "$var wire 1 " << vcd_id(i) << ' ' << pin_name(PinId(i)) << " $end\n";
  }
  os << "$upscope $end\n";
  os << "$enddefinitions $end\n";

  // Merge per-pin change lists into one time-ordered stream.
  std::vector<size_t> idx(kPinCount, 0);
  bool first = true;
  uint64_t emitted_time = 0;
  while (true) {
    uint64_t next_tick = UINT64_MAX;
    for (int i = 0; i < kPinCount; ++i) {
      if (idx[i] < pins_[i].changes.size()) {
        next_tick = std::min(next_tick, pins_[i].changes[idx[i]].first);
      }
    }
    if (next_tick == UINT64_MAX) break;
    emitted_time = next_tick * kVcdUnitsPerTick;
    os << '#' << emitted_time << '\n';
    if (first && next_tick == 0) os << "$dumpvars\n";
    for (int i = 0; i < kPinCount; ++i) {
      auto& ch = pins_[i].changes;
      if (idx[i] < ch.size() && ch[idx[i]].first == next_tick) {
        os << value_char(ch[idx[i]].second) << vcd_id(i) << '\n';
        ++idx[i];
      }
    }
    if (first && next_tick == 0) os << "$end\n";
    first = false;
  }
  // Closing timestamp so the dump records how long the run was.
  if (last_tick_ * kVcdUnitsPerTick > emitted_time || first) {
    os << '#' << last_tick_ * kVcdUnitsPerTick << '\n';
  }
}

}  // namespace wmsim
