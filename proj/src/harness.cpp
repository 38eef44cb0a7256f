#include "wmsim/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wmsim/codec_model.hpp"
#include "wmsim/runtime.hpp"

namespace wmsim {

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

uint32_t parse_u32(const std::string& key, const std::string& v) {
  const int i = parse_int(key, v);
  if (i < 0) throw ConfigError(key + ": must not be negative: '" + v + "'");
  return uint32_t(i);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false: '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw FileError("short write to " + path);
}

std::string hex_byte(uint8_t v) {
  char buf[3];
  std::snprintf(buf, sizeof buf, "%02x", v);
  return buf;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.experiment != "sine" && cfg.experiment != "passthrough" &&
      cfg.experiment != "delay") {
    throw ConfigError("experiment: unknown value '" + cfg.experiment +
                      "', expected sine, passthrough or delay");
  }
  if (!std::isfinite(cfg.duration_s) || !(cfg.duration_s > 0.0)) {
    throw ConfigError("duration_s: must be positive");
  }
  if (!std::isfinite(cfg.freq_hz) || !(cfg.freq_hz > 0.0)) {
    throw ConfigError("freq_hz: must be positive");
  }
  if (!std::isfinite(cfg.amplitude) || cfg.amplitude < 0.0 ||
      cfg.amplitude > 1.0) {
    throw ConfigError("amplitude: must sit in [0, 1]");
  }
  if (!std::isfinite(cfg.delay_s) || cfg.delay_s < 0.0) {
    throw ConfigError("delay_s: must not be negative");
  }
  if (!std::isfinite(cfg.mix_gain) || cfg.mix_gain < 0.0 ||
      cfg.mix_gain > 1.0) {
    throw ConfigError("mix_gain: must sit in [0, 1]");
  }
  if (cfg.volume_db) volume_code(*cfg.volume_db);
  validate(SystemConfig{cfg.clock, cfg.word, cfg.i2c, cfg.trace});
  if ((cfg.experiment == "passthrough" || cfg.experiment == "delay") &&
      cfg.in_path.empty()) {
    throw ConfigError("in: experiment '" + cfg.experiment +
                      "' needs an input wav file");
  }
}

void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "experiment") cfg.experiment = value;
  else if (key == "duration_s") cfg.duration_s = parse_double(key, value);
  else if (key == "freq_hz") cfg.freq_hz = parse_double(key, value);
  else if (key == "amplitude") cfg.amplitude = parse_double(key, value);
  else if (key == "delay_s") cfg.delay_s = parse_double(key, value);
  else if (key == "mix_gain") cfg.mix_gain = parse_double(key, value);
  else if (key == "volume_db") cfg.volume_db = parse_int(key, value);
  else if (key == "clock.divider") cfg.clock.divider = parse_u32(key, value);
  else if (key == "audio.bit_length") cfg.word.bit_length = parse_u32(key, value);
  else if (key == "i2c.sclk_hz") cfg.i2c.sclk_hz = parse_u32(key, value);
  else if (key == "in") cfg.in_path = value;
  else if (key == "out") cfg.out_path = value;
  else if (key == "vcd") cfg.vcd_path = value;
  else if (key == "summary") cfg.summary_path = value;
  else if (key == "trace.enable") cfg.trace = parse_bool(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    try {
      apply_key_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["experiment"] = cfg.experiment;
  j["duration_s"] = cfg.duration_s;
  j["freq_hz"] = cfg.freq_hz;
  j["amplitude"] = cfg.amplitude;
  j["delay_s"] = cfg.delay_s;
  j["mix_gain"] = cfg.mix_gain;
  if (cfg.volume_db) j["volume_db"] = *cfg.volume_db;
  else j["volume_db"] = nullptr;
  j["clock"]["divider"] = cfg.clock.divider;
  j["clock"]["fs_divider"] = cfg.clock.fs_divider;
  j["audio"]["bit_length"] = cfg.word.bit_length;
  j["i2c"]["sclk_hz"] = cfg.i2c.sclk_hz;
  j["i2c"]["slave_addr"] = cfg.i2c.slave_addr;
  j["in"] = cfg.in_path;
  j["out"] = cfg.out_path;
  j["vcd"] = cfg.vcd_path;
  j["summary"] = cfg.summary_path;
  j["trace"] = cfg.trace;
  return j;
}

nlohmann::ordered_json run_experiment(const RunConfig& cfg) {
  validate(cfg);
  const bool traced = cfg.trace || !cfg.vcd_path.empty();

  AudioSystem sys(SystemConfig{cfg.clock, cfg.word, cfg.i2c, traced});
  Runtime rt(sys);
  const Rates& rates = sys.rates();
  const uint32_t bl = cfg.word.bit_length;

  const auto frames = uint64_t(std::llround(cfg.duration_s * rates.fs_hz));
  if (frames == 0) {
    throw ConfigError("duration_s: shorter than one sample period");
  }

  nlohmann::ordered_json params;
  SampleStream input;
  if (cfg.experiment != "sine") {
    input = read_wav(cfg.in_path, bl);
    sys.codec().drive_adc_from(input.samples, bl);
    params["in"] = cfg.in_path;
    params["input_frames"] = input.samples.size();
  }

  rt.configure_defaults();
  if (cfg.volume_db) rt.set_volume(*cfg.volume_db);

  if (cfg.experiment == "sine") {
    params["freq_hz"] = cfg.freq_hz;
    params["amplitude"] = cfg.amplitude;
    rt.run_sine(cfg.freq_hz, cfg.amplitude, frames);
  } else if (cfg.experiment == "passthrough") {
    rt.run_passthrough(frames);
  } else {
    DelayParams dp;
    dp.delay_samples = uint64_t(std::llround(cfg.delay_s * rates.fs_hz));
    dp.mix_gain_q15 = int32_t(std::llround(cfg.mix_gain * 32768.0));
    params["delay_s"] = cfg.delay_s;
    params["delay_samples"] = dp.delay_samples;
    params["mix_gain"] = cfg.mix_gain;
    params["mix_gain_q15"] = dp.mix_gain_q15;
    rt.run_delay(dp, frames);
  }

  const auto& capture = sys.codec().capture_dac();

  if (!cfg.out_path.empty()) {
    SampleStream out_stream;
    out_stream.samples = capture;
    out_stream.bit_length = bl;
    out_stream.sample_rate_hz = uint32_t(std::llround(rates.fs_hz));
    write_wav(cfg.out_path, out_stream);
  }
  if (!cfg.vcd_path.empty()) {
    std::ofstream f(cfg.vcd_path, std::ios::binary | std::ios::trunc);
    if (!f) throw FileError("cannot open " + cfg.vcd_path + " for writing");
    sys.sim().trace().write_vcd(f);
    if (!f) throw FileError("short write to " + cfg.vcd_path);
  }

  nlohmann::ordered_json j;
  j["experiment"] = cfg.experiment;
  j["clock"]["system_hz"] = kSystemFreqHz;
  j["clock"]["divider"] = cfg.clock.divider;
  j["clock"]["bclk_hz"] = rates.bclk_hz;
  j["clock"]["fs_divider"] = cfg.clock.fs_divider;
  j["clock"]["sample_rate_hz"] = rates.fs_hz;
  j["clock"]["lrc_period_ticks"] = rates.lrc_period_ticks;
  j["audio"]["bit_length"] = bl;
  j["i2c"]["sclk_hz"] = cfg.i2c.sclk_hz;
  j["i2c"]["slave_addr"] = cfg.i2c.slave_addr;
  j["params"] = params;
  j["frames_requested"] = frames;
  j["frames_captured"] = capture.size();
  j["ticks"] = sys.sim().tick_count();
  if (cfg.volume_db) j["volume_db"] = *cfg.volume_db;

  auto writes = nlohmann::ordered_json::array();
  for (const auto& w : sys.codec().write_log()) {
    writes.push_back({w.first, w.second});
  }
  j["codec"]["writes"] = writes;
  j["codec"]["nack_count"] = sys.i2c().nack_count();
  j["codec"]["format_bit_length"] = format_register_bit_length(sys.codec().regs());

  if (cfg.experiment != "sine") {
    j["stimulus_exhausted"] = sys.codec().stimulus_exhausted();
  }
  if (cfg.experiment == "sine" && capture.size() >= 1025) {
    std::vector<double> x;
    x.reserve(capture.size() - 1);
    for (size_t i = 1; i < capture.size(); ++i) {
      x.push_back(double(capture[i].left));
    }
    j["measured_dominant_hz"] = dominant_frequency(x, rates.fs_hz);
  }

  auto first = nlohmann::ordered_json::array();
  for (size_t i = 0; i < capture.size() && i < 8; ++i) {
    first.push_back({capture[i].left, capture[i].right});
  }
  j["first_samples"] = first;
  j["trace_enabled"] = traced;
  j["outputs"]["wav"] = cfg.out_path;
  j["outputs"]["vcd"] = cfg.vcd_path;
  j["outputs"]["summary"] = cfg.summary_path;

  if (!cfg.summary_path.empty()) {
    write_text_file(cfg.summary_path, j.dump(2) + "\n");
  }
  return j;
}

DecodeReport decode_trace_report(const VcdData& vcd, uint32_t bit_length) {
  std::ostringstream os;
  bool ok = true;

  const auto txns = decode_i2c(vcd.pins[int(PinId::Sclk)],
                               vcd.pins[int(PinId::Sdin)], vcd.end_tick);
  os << "i2c: " << txns.size() << " transaction(s)\n";
  for (size_t i = 0; i < txns.size(); ++i) {
    const auto& t = txns[i];
    size_t acked = 0;
    for (const bool a : t.acks) acked += a ? 1 : 0;
    os << "  #" << i << " ticks " << t.start_tick << ".." << t.stop_tick
       << " addr 0x" << hex_byte(t.addr_byte) << " payload";
    if (t.payload.empty()) os << " (none)";
    for (const uint8_t b : t.payload) os << ' ' << hex_byte(b);
    os << " acks " << acked << "/" << t.acks.size() << " bit_clocks "
       << t.bit_clocks << (t.well_formed ? " ok" : " MALFORMED") << "\n";
    if (!t.well_formed) ok = false;
  }

  const auto report_frames = [&](const char* label, PinId lrc, PinId dat) {
    const auto& bclk = vcd.pins[int(PinId::Bclk)];
    try {
      const auto frames = decode_frames(bclk, vcd.pins[int(lrc)],
                                        vcd.pins[int(dat)], bit_length,
                                        vcd.end_tick);
      os << label << ": " << frames.size() << " frame(s)\n";
      for (size_t i = 0; i < frames.size() && i < 8; ++i) {
        os << "  #" << i << " lrc_tick " << frames[i].lrc_tick << " L "
           << frames[i].sample.left << " R " << frames[i].sample.right << "\n";
      }
      if (frames.size() > 8) os << "  ...\n";
    } catch (const DecodeError& e) {
      os << label << ": decode error: " << e.what() << "\n";
      ok = false;
    }
  };
  report_frames("dac playback", PinId::DacLrc, PinId::DacDat);
  report_frames("adc capture", PinId::AdcLrc, PinId::AdcDat);

  return {os.str(), ok};
}

}  // namespace wmsim
