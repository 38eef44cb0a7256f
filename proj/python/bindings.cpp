#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wmsim/harness.hpp"
#include "wmsim/runtime.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::null:
      return py::none();
    case nlohmann::ordered_json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::ordered_json::value_t::number_integer:
      return py::int_(j.get<int64_t>());
    case nlohmann::ordered_json::value_t::number_unsigned:
      return py::int_(j.get<uint64_t>());
    case nlohmann::ordered_json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::ordered_json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::ordered_json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::ordered_json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
    default:
      throw wmsim::Error("unsupported json value type");
  }
}

std::string value_to_config_string(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::str>(v)) return v.cast<std::string>();
  return py::str(v).cast<std::string>();  // int and float repr round-trips
}

wmsim::RunConfig config_from_dict(const py::dict& d) {
  wmsim::RunConfig cfg;
  for (const auto& item : d) {
    wmsim::apply_key_value(cfg, item.first.cast<std::string>(),
                           value_to_config_string(item.second));
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Cycle accurate simulator of an FPGA audio interface driving a WM8731 "
      "codec. Config dicts use the same keys as the CLI config files: "
      "experiment, duration_s, freq_hz, amplitude, delay_s, mix_gain, "
      "volume_db, clock.divider, audio.bit_length, i2c.sclk_hz, in, out, "
      "vcd, summary, trace.enable.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const wmsim::ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const wmsim::FileError& e) {
      PyErr_SetString(PyExc_IOError, e.what());
    } catch (const wmsim::TimeoutError& e) {
      PyErr_SetString(PyExc_TimeoutError, e.what());
    } catch (const wmsim::Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def(
      "run_experiment",
      [](const py::dict& config) {
        return json_to_py(wmsim::run_experiment(config_from_dict(config)));
      },
      py::arg("config"),
      "Run one experiment; returns the summary document as a dict.");

  m.def(
      "config_defaults",
      []() { return json_to_py(wmsim::config_json(wmsim::RunConfig{})); },
      "The default configuration as a dict.");

  m.def(
      "decode_trace",
      [](const std::string& path, uint32_t bit_length) {
        const auto report =
            wmsim::decode_trace_report(wmsim::read_vcd(path), bit_length);
        py::dict out;
        out["text"] = report.text;
        out["ok"] = report.ok;
        return out;
      },
      py::arg("path"), py::arg("bit_length") = 16,
      "Re-decode a VCD trace; returns {'text', 'ok'}.");

  m.def(
      "derive_rates",
      [](uint32_t divider, uint32_t fs_divider) {
        const wmsim::ClockConfig cfg{divider, fs_divider};
        wmsim::validate(cfg);
        const auto r = wmsim::derive_rates(cfg);
        py::dict out;
        out["bclk_hz"] = r.bclk_hz;
        out["sample_rate_hz"] = r.fs_hz;
        out["lrc_period_ticks"] = r.lrc_period_ticks;
        return out;
      },
      py::arg("divider") = 6, py::arg("fs_divider") = 256,
      "Clock rates derived from the 80 MHz system clock.");

  m.def("volume_code", &wmsim::volume_code, py::arg("db"),
        "Headphone volume register code for a dB value in [-73, 6].");

  m.def(
      "dominant_frequency",
      [](const std::vector<double>& samples, double sample_rate_hz) {
        return wmsim::dominant_frequency(samples, sample_rate_hz);
      },
      py::arg("samples"), py::arg("sample_rate_hz"),
      "Peak of the Blackman windowed FFT magnitude spectrum.");

  m.def(
      "read_wav",
      [](const std::string& path, uint32_t bit_length) {
        const auto s = wmsim::read_wav(path, bit_length);
        py::list samples;
        for (const auto& smp : s.samples) {
          samples.append(py::make_tuple(smp.left, smp.right));
        }
        py::dict out;
        out["samples"] = samples;
        out["bit_length"] = s.bit_length;
        out["sample_rate_hz"] = s.sample_rate_hz;
        return out;
      },
      py::arg("path"), py::arg("bit_length") = 16,
      "Load a PCM wav as stereo (left, right) tuples at the given word "
      "length.");

  m.def(
      "write_wav",
      [](const std::string& path,
         const std::vector<std::pair<int32_t, int32_t>>& samples,
         uint32_t bit_length, uint32_t sample_rate_hz) {
        wmsim::SampleStream s;
        s.bit_length = bit_length;
        s.sample_rate_hz = sample_rate_hz;
        s.samples.reserve(samples.size());
        for (const auto& [l, r] : samples) s.samples.push_back({l, r});
        wmsim::write_wav(path, s);
      },
      py::arg("path"), py::arg("samples"), py::arg("bit_length") = 16,
      py::arg("sample_rate_hz") = 52083,
      "Write stereo (left, right) tuples as a PCM wav.");
}
