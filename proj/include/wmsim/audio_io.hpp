#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wmsim/audio_serial.hpp"
#include "wmsim/sim.hpp"

namespace wmsim {

// In-memory stereo stream. bit_length says which word length the sample
// values use; sample_rate_hz is carried for file headers and reports.
struct SampleStream {
  std::vector<StereoSample> samples;
  uint32_t bit_length = 16;
  uint32_t sample_rate_hz = 0;
};

// Rescales a two's complement sample between word lengths: widening shifts
// left, narrowing divides (rounding toward zero), so zero stays zero and
// the scale factor is exact in both directions.
int32_t convert_width(int32_t v, uint32_t from_bits, uint32_t to_bits);

// PCM WAV, 16 or 24 bit, mono or stereo (mono lands on both channels).
// Samples are rescaled to target_bit_length on load. Anything else in the
// file (other codecs, other widths) is a FileError.
SampleStream read_wav(const std::string& path, uint32_t target_bit_length);

// Writes stereo PCM. 16-bit streams use a 16-bit container, every other
// word length a 24-bit one (20-bit widened, 32-bit narrowed).
void write_wav(const std::string& path, const SampleStream& s);

// Peak of the Blackman-windowed FFT magnitude spectrum, searched over the
// positive frequency bins. Uses the largest power-of-two prefix of x and
// needs at least 1024 samples. Resolution is one bin, rate / N.
double dominant_frequency(const std::vector<double>& x, double sample_rate_hz);

// Pin traces reloaded from a VCD file written by the trace buffer. Only
// signals whose names match the known pins are kept; timestamps must fall
// on whole 12.5 ns ticks.
struct VcdData {
  std::array<PinTrace, kPinCount> pins;
  uint64_t end_tick = 0;
};

VcdData read_vcd(const std::string& path);

}  // namespace wmsim
