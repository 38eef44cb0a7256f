"""Cycle accurate simulator of an FPGA audio interface for the WM8731 codec."""

from wm8731sim._core import (
    config_defaults,
    decode_trace,
    derive_rates,
    dominant_frequency,
    read_wav,
    run_experiment,
    volume_code,
    write_wav,
)

__all__ = [
    "config_defaults",
    "decode_trace",
    "derive_rates",
    "dominant_frequency",
    "read_wav",
    "run_experiment",
    "volume_code",
    "write_wav",
]
