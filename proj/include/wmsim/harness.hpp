#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wmsim/audio_io.hpp"
#include "wmsim/system.hpp"

namespace wmsim {

// One experiment run, assembled from config file and command line.
// Durations are seconds; amplitude and mix_gain are full-scale fractions;
// delay_s is converted to whole samples at the derived rate. Paths left
// empty mean "do not write that file". A vcd path implies tracing.
struct RunConfig {
  std::string experiment = "sine";  // sine | passthrough | delay
  double duration_s = 0.5;
  double freq_hz = 440.0;
  double amplitude = 0.5;
  double delay_s = 0.25;
  double mix_gain = 0.5;
  std::optional<int> volume_db;

  ClockConfig clock;
  AudioWordConfig word;
  I2cConfig i2c;

  std::string in_path;
  std::string out_path;
  std::string vcd_path;
  std::string summary_path;
  bool trace = false;
};

void validate(const RunConfig& cfg);

// Applies one config setting. Keys: experiment, duration_s, freq_hz,
// amplitude, delay_s, mix_gain, volume_db, clock.divider,
// audio.bit_length, i2c.sclk_hz, in, out, vcd, summary, trace.enable.
void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value);

// key = value lines, # comments, blank lines. Errors carry file:line.
void apply_config_file(RunConfig& cfg, const std::string& path);

// The effective configuration as JSON, for --config-dump.
nlohmann::ordered_json config_json(const RunConfig& cfg);

// Builds the rig, brings the codec up over the control bus, runs the
// experiment and writes whichever output files are configured. Returns
// the summary document (also written to summary_path when set). Every
// field in it is deterministic, so identical configs produce identical
// bytes in all outputs.
nlohmann::ordered_json run_experiment(const RunConfig& cfg);

// Offline trace check: re-decodes the control bus traffic and both audio
// directions from a reloaded VCD. ok is false when any transaction is
// malformed or a frame fails to decode.
struct DecodeReport {
  std::string text;
  bool ok = false;
};

DecodeReport decode_trace_report(const VcdData& vcd, uint32_t bit_length);

}  // namespace wmsim
