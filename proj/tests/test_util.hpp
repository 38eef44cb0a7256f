#pragma once

// Small independent oracles for the tests. These re-derive expected words
// and waveform properties directly from pin traces, without going through
// the library's decoders, so decoder and device bugs cannot cancel out.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wmsim/sim.hpp"

namespace testutil {

// Ticks of 0 -> 1 transitions at or before end_tick.
inline std::vector<uint64_t> rising_ticks(const wmsim::PinTrace& tr,
                                          uint64_t end_tick) {
  std::vector<uint64_t> out;
  for (size_t i = 1; i < tr.changes.size(); ++i) {
    if (tr.changes[i].first > end_tick) break;
    if (tr.changes[i].second == 1 && tr.changes[i - 1].second != 1) {
      out.push_back(tr.changes[i].first);
    }
  }
  return out;
}

inline int64_t sign_extend_ref(uint64_t w, uint32_t bits) {
  w &= (bits >= 64) ? ~0ull : ((1ull << bits) - 1);
  if ((w >> (bits - 1)) & 1) return int64_t(w) - int64_t(1ull << bits);
  return int64_t(w);
}

// Reads one serial word off `dat` by sampling at the BCLK rising edge of
// each cell: cell k of the frame starting at T spans [T + k*div,
// T + (k+1)*div) and its rising edge sits div/2 into the cell. Data cells
// start at first_cell, MSB first.
inline int64_t sample_word(const wmsim::PinTrace& dat, uint64_t frame_tick,
                           uint64_t div, uint32_t first_cell, uint32_t nbits) {
  uint64_t w = 0;
  for (uint32_t k = 0; k < nbits; ++k) {
    const uint64_t rise = frame_tick + (first_cell + k) * div + div / 2;
    w = (w << 1) | (dat.value_at(rise) & 1);
  }
  return sign_extend_ref(w, nbits);
}

// Start/stop census of an I2C trace: SDIN level moves seen while SCLK is
// high. Falls are starts, rises are stops, and nothing else is allowed up
// there. A same-tick SCLK move settles before the SDIN move, matching the
// two-phase pin update.
struct SdinScan {
  int starts = 0;
  int stops = 0;
  int violations = 0;
};

inline SdinScan scan_sdin(const wmsim::PinTrace& sclk,
                          const wmsim::PinTrace& sdin, uint64_t end_tick) {
  SdinScan r;
  size_t i = 0, j = 0;
  uint8_t cs = 0, cd = 1;
  auto level = [](uint8_t v) -> uint8_t {
    return v == wmsim::PinState::kZ ? 1 : v;
  };
  while (i < sclk.changes.size() || j < sdin.changes.size()) {
    const uint64_t ts =
        i < sclk.changes.size() ? sclk.changes[i].first : ~0ull;
    const uint64_t td =
        j < sdin.changes.size() ? sdin.changes[j].first : ~0ull;
    if (ts <= td) {
      if (ts > end_tick) break;
      cs = sclk.changes[i++].second;
    } else {
      if (td > end_tick) break;
      const uint8_t lvl = level(sdin.changes[j++].second);
      if (lvl != cd) {
        if (cs == 1) {
          if (cd == 1 && lvl == 0) ++r.starts;
          else if (cd == 0 && lvl == 1) ++r.stops;
          else ++r.violations;
        }
        cd = lvl;
      }
    }
  }
  return r;
}

// Reference for the delay experiment: y[n] = clamp((g*x[n] + g*x[n-D]) >> 15)
// with x[n<0] = 0; D = 0 taps the current sample.
inline std::vector<int32_t> delay_reference(const std::vector<int32_t>& x,
                                            uint64_t d, int64_t g, int64_t lo,
                                            int64_t hi) {
  std::vector<int32_t> y(x.size());
  for (size_t n = 0; n < x.size(); ++n) {
    const int64_t xd = d == 0 ? x[n] : (n >= d ? x[n - d] : 0);
    const int64_t acc = (g * x[n] + g * xd) >> 15;
    y[n] = int32_t(std::clamp(acc, lo, hi));
  }
  return y;
}

}  // namespace testutil
