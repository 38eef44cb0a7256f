#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wmsim {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration value; message carries the field path, e.g. "clock.divider: ...".
struct ConfigError : Error {
  using Error::Error;
};

// Fatal condition inside the simulation loop (e.g. bus contention). Carries the tick.
struct SimulationError : Error {
  SimulationError(const std::string& msg, uint64_t tick_) : Error(msg), tick(tick_) {}
  uint64_t tick = 0;
};

// A bounded wait expired (run_until, sync_*, i2c idle waits).
struct TimeoutError : Error {
  using Error::Error;
};

// Trace decoding failure; carries the tick where decoding broke down.
struct DecodeError : Error {
  DecodeError(const std::string& msg, uint64_t tick_) : Error(msg), tick(tick_) {}
  uint64_t tick = 0;
};

// File I/O or file format problem (WAV, VCD, config file).
struct FileError : Error {
  using Error::Error;
};

}  // namespace wmsim
