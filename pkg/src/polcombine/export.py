"""CSV export of frequency responses, Forney taps and equalizer coefficients."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _write(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_response_csv(path, freq_hz, values) -> Path:
    values = np.asarray(values, dtype=complex)
    return _write(path, ("freq_hz", "re", "im"), ((repr(float(f)), repr(float(v.real)), repr(float(v.imag))) for f, v in zip(freq_hz, values)))


def write_taps_csv(path, taps) -> Path:
    taps = np.asarray(taps, dtype=complex)
    return _write(path, ("index", "re", "im"), ((i, repr(float(v.real)), repr(float(v.imag))) for i, v in enumerate(taps)))


def read_complex_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """First column and the complex value column pair of an exported CSV."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def export_field(fr, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        write_response_csv(out / f"field_{name}.csv", fr.freq_grid_hz, getattr(fr, f"e_{name}"))
        for name in ("xp", "yp", "zp")
    ]


def export_branches(branches, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [write_response_csv(out / f"branch_{b.label}.csv", b.freq_grid_hz, b.c_of_f) for b in branches.values()]


def export_channels(channels, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [write_taps_csv(out / f"fom_{name}.csv", ch.taps) for name, ch in channels.items()]
