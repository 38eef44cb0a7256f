#include "wmsim/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

#include "wmsim/errors.hpp"

namespace wmsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr uint64_t kTickPs = 12500;  // 12.5 ns system tick

uint16_t rd_u16(const std::vector<uint8_t>& b, size_t off) {
  if (off + 2 > b.size()) throw FileError("wav: truncated file");
  return uint16_t(b[off] | (b[off + 1] << 8));
}

uint32_t rd_u32(const std::vector<uint8_t>& b, size_t off) {
  if (off + 4 > b.size()) throw FileError("wav: truncated file");
  return uint32_t(b[off]) | uint32_t(b[off + 1]) << 8 |
         uint32_t(b[off + 2]) << 16 | uint32_t(b[off + 3]) << 24;
}

void put_u16(std::vector<uint8_t>& b, uint16_t v) {
  b.push_back(uint8_t(v));
  b.push_back(uint8_t(v >> 8));
}

void put_u32(std::vector<uint8_t>& b, uint32_t v) {
  put_u16(b, uint16_t(v));
  put_u16(b, uint16_t(v >> 16));
}

void put_tag(std::vector<uint8_t>& b, const char* tag) {
  b.insert(b.end(), tag, tag + 4);
}

bool tag_is(const std::vector<uint8_t>& b, size_t off, const char* tag) {
  return off + 4 <= b.size() && std::memcmp(b.data() + off, tag, 4) == 0;
}

}  // namespace

int32_t convert_width(int32_t v, uint32_t from_bits, uint32_t to_bits) {
  if (to_bits > from_bits) {
    return int32_t(int64_t(v) * (int64_t(1) << (to_bits - from_bits)));
  }
  if (to_bits < from_bits) {
    return v / int32_t(1u << (from_bits - to_bits));
  }
  return v;
}

SampleStream read_wav(const std::string& path, uint32_t target_bit_length) {
  validate(AudioWordConfig{target_bit_length});
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot open " + path);
  std::vector<uint8_t> b((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());

  if (!tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
    throw FileError("wav: not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false, have_data = false;
  uint16_t fmt_tag = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t p = 12;
  while (p + 8 <= b.size()) {
    const uint32_t size = rd_u32(b, p + 4);
    const size_t body = p + 8;
    if (body + size > b.size()) throw FileError("wav: chunk overruns file");
    if (tag_is(b, p, "fmt ")) {
      if (size < 16) throw FileError("wav: fmt chunk too small");
      fmt_tag = rd_u16(b, body);
      channels = rd_u16(b, body + 2);
      rate = rd_u32(b, body + 4);
      bits = rd_u16(b, body + 14);
      have_fmt = true;
    } else if (tag_is(b, p, "data")) {
      data_off = body;
      data_len = size;
      have_data = true;
    }
    p = body + size + (size & 1);
  }

  if (!have_fmt || !have_data) throw FileError("wav: missing fmt or data chunk");
  if (fmt_tag != 1) throw FileError("wav: only PCM (format tag 1) is supported");
  if (bits != 16 && bits != 24) {
    throw FileError("wav: only 16 or 24 bit samples are supported, got " +
                    std::to_string(bits));
  }
  if (channels != 1 && channels != 2) {
    throw FileError("wav: only mono or stereo is supported, got " +
                    std::to_string(channels) + " channels");
  }

  const size_t bytes = bits / 8;
  const size_t block = bytes * channels;
  const size_t frames = data_len / block;

  auto sample_at = [&](size_t off) -> int32_t {
    if (bits == 16) return int32_t(int16_t(rd_u16(b, off)));
    const uint32_t raw = uint32_t(b[off]) | uint32_t(b[off + 1]) << 8 |
                         uint32_t(b[off + 2]) << 16;
    return sign_extend(raw, 24);
  };

  SampleStream out;
  out.bit_length = target_bit_length;
  out.sample_rate_hz = rate;
  out.samples.reserve(frames);
  for (size_t i = 0; i < frames; ++i) {
    const size_t off = data_off + i * block;
    const int32_t l = convert_width(sample_at(off), bits, target_bit_length);
    const int32_t r = channels == 2
                          ? convert_width(sample_at(off + bytes), bits,
                                          target_bit_length)
                          : l;
    out.samples.push_back({l, r});
  }
  return out;
}

void write_wav(const std::string& path, const SampleStream& s) {
  validate(AudioWordConfig{s.bit_length});
  const uint16_t bits = s.bit_length == 16 ? 16 : 24;
  const uint16_t channels = 2;
  const uint32_t bytes = bits / 8;
  const uint32_t block = bytes * channels;
  const uint32_t data_len = uint32_t(s.samples.size()) * block;

  std::vector<uint8_t> b;
  b.reserve(44 + data_len);
  put_tag(b, "RIFF");
  put_u32(b, 36 + data_len);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, channels);
  put_u32(b, s.sample_rate_hz);
  put_u32(b, s.sample_rate_hz * block);
  put_u16(b, uint16_t(block));
  put_u16(b, bits);
  put_tag(b, "data");
  put_u32(b, data_len);

  const int32_t lo = sample_min(bits), hi = sample_max(bits);
  auto put_sample = [&](int32_t v) {
    v = std::clamp(convert_width(v, s.bit_length, bits), lo, hi);
    b.push_back(uint8_t(v));
    b.push_back(uint8_t(v >> 8));
    if (bytes == 3) b.push_back(uint8_t(v >> 16));
  };
  for (const auto& smp : s.samples) {
    put_sample(smp.left);
    put_sample(smp.right);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
  if (!f) throw FileError("short write to " + path);
}

double dominant_frequency(const std::vector<double>& x, double sample_rate_hz) {
  if (x.size() < 1024) {
    throw ConfigError("dominant_frequency needs at least 1024 samples, got " +
                      std::to_string(x.size()));
  }
  if (!(sample_rate_hz > 0.0)) {
    throw ConfigError("dominant_frequency needs a positive sample rate");
  }
  size_t n = 1;
  while (n * 2 <= x.size()) n *= 2;

  std::vector<std::complex<double>> a(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = double(i) / double(n - 1);
    const double w =
        0.42 - 0.5 * std::cos(kTwoPi * u) + 0.08 * std::cos(2.0 * kTwoPi * u);
    a[i] = x[i] * w;
  }

  // Iterative radix-2 FFT, bit-reversal permutation first.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / double(len);
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }

  size_t best = 1;
  double best_mag = -1.0;
  for (size_t k = 1; k <= n / 2; ++k) {
    const double m = std::norm(a[k]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return double(best) * sample_rate_hz / double(n);
}

VcdData read_vcd(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("cannot open " + path);

  auto pin_index = [](const std::string& name) -> int {
    for (int i = 0; i < kPinCount; ++i) {
      if (name == pin_name(PinId(i))) return i;
    }
    return -1;
  };
  auto skip_to_end = [&](std::istream& in) {
    std::string t;
    while (in >> t && t != "$end") {
    }
  };

  std::map<std::string, int> id_to_pin;
  uint64_t unit_ps = 0;
  std::string tok;
  bool defs_done = false;
  while (!defs_done && f >> tok) {
    if (tok == "$timescale") {
      std::string body, t;
      while (f >> t && t != "$end") body += t;
      const size_t digits = body.find_first_not_of("0123456789");
      if (digits == 0 || digits == std::string::npos) {
        throw FileError("vcd: bad timescale: " + body);
      }
      const uint64_t mag = std::stoull(body.substr(0, digits));
      const std::string unit = body.substr(digits);
      uint64_t mult = 0;
      if (unit == "s") mult = 1000000000000ull;
      else if (unit == "ms") mult = 1000000000ull;
      else if (unit == "us") mult = 1000000ull;
      else if (unit == "ns") mult = 1000ull;
      else if (unit == "ps") mult = 1ull;
      else throw FileError("vcd: unsupported timescale unit: " + unit);
      unit_ps = mag * mult;
    } else if (tok == "$var") {
      std::string type, width, id, name;
      if (!(f >> type >> width >> id >> name)) {
        throw FileError("vcd: truncated $var");
      }
      skip_to_end(f);
      const int pi = pin_index(name);
      if (pi >= 0) id_to_pin[id] = pi;
    } else if (tok == "$enddefinitions") {
      skip_to_end(f);
      defs_done = true;
    } else if (!tok.empty() && tok[0] == '$' && tok != "$end") {
      skip_to_end(f);
    }
  }
  if (unit_ps == 0) throw FileError("vcd: missing timescale");

  VcdData out;
  uint64_t cur_tick = 0;
  while (f >> tok) {
    if (tok[0] == '#') {
      const std::string num = tok.substr(1);
      if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
        throw FileError("vcd: bad timestamp: " + tok);
      }
      const uint64_t ps = std::stoull(num) * unit_ps;
      if (ps % kTickPs != 0) {
        throw FileError("vcd: timestamp off the 12.5 ns tick grid: " + tok);
      }
      cur_tick = ps / kTickPs;
      out.end_tick = std::max(out.end_tick, cur_tick);
    } else if (tok[0] == '$') {
      // $dumpvars and its $end wrap the initial values; the value tokens
      // between them parse like any other change
      continue;
    } else if (tok[0] == 'b' || tok[0] == 'B' || tok[0] == 'r' || tok[0] == 'R') {
      std::string id;
      f >> id;  // vector change, none of our signals
    } else {
      const char v = tok[0];
      const auto it = id_to_pin.find(tok.substr(1));
      if (it == id_to_pin.end()) continue;
      const uint8_t val = v == '1' ? 1 : v == '0' ? 0 : PinState::kZ;
      out.pins[size_t(it->second)].append(cur_tick, val);
    }
  }
  return out;
}

}  // namespace wmsim
