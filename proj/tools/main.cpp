#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wmsim/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Cycle accurate simulator of an FPGA audio interface driving a "
      "WM8731 codec"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "Run an experiment and write the configured outputs");
  wmsim::RunConfig cfg;
  std::string config_path;
  std::string experiment = cfg.experiment;
  double duration = cfg.duration_s;
  double freq = cfg.freq_hz;
  double amplitude = cfg.amplitude;
  double delay = cfg.delay_s;
  double mix = cfg.mix_gain;
  int volume = 0;
  uint32_t divider = cfg.clock.divider;
  uint32_t bit_length = cfg.word.bit_length;
  uint32_t sclk = cfg.i2c.sclk_hz;
  std::string in_path, out_path, vcd_path, summary_path;
  bool trace = false;
  bool config_dump = false;

  run->add_option("--config", config_path,
                  "key = value config file, applied before the flags");
  auto* o_exp =
      run->add_option("--experiment", experiment, "sine, passthrough or delay");
  auto* o_dur = run->add_option("--duration-s", duration, "run length in seconds");
  auto* o_freq = run->add_option("--freq-hz", freq, "sine frequency");
  auto* o_amp = run->add_option("--amplitude", amplitude,
                                "sine amplitude, fraction of full scale");
  auto* o_del =
      run->add_option("--delay-s", delay, "delay line length in seconds");
  auto* o_mix =
      run->add_option("--mix-gain", mix, "dry and delayed tap gain, 0..1");
  auto* o_vol =
      run->add_option("--volume-db", volume, "headphone volume, -73..6 dB");
  auto* o_div =
      run->add_option("--divider", divider, "system ticks per BCLK period");
  auto* o_bl = run->add_option("--bit-length", bit_length,
                               "word length: 16, 20, 24 or 32");
  auto* o_sclk = run->add_option("--sclk-hz", sclk, "control bus clock");
  auto* o_in =
      run->add_option("--in", in_path, "input wav (passthrough and delay)");
  auto* o_out = run->add_option("--out", out_path, "output wav path");
  auto* o_vcd = run->add_option("--vcd", vcd_path,
                                "pin trace VCD path (implies tracing)");
  auto* o_sum = run->add_option("--summary", summary_path, "summary JSON path");
  auto* o_trace = run->add_flag("--trace", trace, "record the pin trace");
  run->add_flag("--config-dump", config_dump,
                "print the effective config as JSON and exit");

  auto* dec = app.add_subcommand(
      "decode", "Re-decode control and audio traffic from a VCD trace");
  std::string dec_vcd;
  uint32_t dec_bl = 16;
  dec->add_option("vcd", dec_vcd, "VCD file written by a traced run")
      ->required();
  dec->add_option("--bit-length", dec_bl,
                  "word length used when the trace was recorded");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!config_path.empty()) wmsim::apply_config_file(cfg, config_path);
      if (o_exp->count()) cfg.experiment = experiment;
      if (o_dur->count()) cfg.duration_s = duration;
      if (o_freq->count()) cfg.freq_hz = freq;
      if (o_amp->count()) cfg.amplitude = amplitude;
      if (o_del->count()) cfg.delay_s = delay;
      if (o_mix->count()) cfg.mix_gain = mix;
      if (o_vol->count()) cfg.volume_db = volume;
      if (o_div->count()) cfg.clock.divider = divider;
      if (o_bl->count()) cfg.word.bit_length = bit_length;
      if (o_sclk->count()) cfg.i2c.sclk_hz = sclk;
      if (o_in->count()) cfg.in_path = in_path;
      if (o_out->count()) cfg.out_path = out_path;
      if (o_vcd->count()) cfg.vcd_path = vcd_path;
      if (o_sum->count()) cfg.summary_path = summary_path;
      if (o_trace->count()) cfg.trace = trace;

      if (config_dump) {
        std::cout << wmsim::config_json(cfg).dump(2) << "\n";
        return 0;
      }
      std::cout << wmsim::run_experiment(cfg).dump(2) << "\n";
      return 0;
    }
    const auto vcd = wmsim::read_vcd(dec_vcd);
    const auto report = wmsim::decode_trace_report(vcd, dec_bl);
    std::cout << report.text;
    return report.ok ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
