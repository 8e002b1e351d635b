"""Touchstone and CSV serialization of S-parameter sweeps."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DomainError
from .netsim import SParamSweep

DB_FLOOR = -200.0


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` via a same-directory temp file and rename.

    I/O failures are re-raised as ``OSError`` naming the target path.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _check_sweep(sweep: SParamSweep):
    if len(sweep) == 0:
        raise DomainError("sweep", sweep, "must be non-empty")
    if np.any(np.diff(sweep.freqs) <= 0):
        raise DomainError("sweep.freqs", "non-ascending", "frequencies must be strictly ascending")


def touchstone_text(sweep: SParamSweep) -> str:
    _check_sweep(sweep)
    z1, z2 = sweep.z_ref
    if z1 != z2:
        raise DomainError("z_ref", sweep.z_ref, "Touchstone v1 needs one reference impedance")
    lines = [f"# HZ S RI R {z1:g}"]
    for f, m in zip(sweep.freqs, sweep.s):
        cols = [f]
        # v1 two-port order: S11 S21 S12 S22
        for z in (m[0, 0], m[1, 0], m[0, 1], m[1, 1]):
            cols += [z.real, z.imag]
        lines.append(" ".join(f"{v:.9e}" for v in cols))
    return "\n".join(lines) + "\n"


def write_touchstone(sweep: SParamSweep, path: str | os.PathLike) -> Path:
    return atomic_write_text(path, touchstone_text(sweep))


def read_touchstone(path: str | os.PathLike) -> SParamSweep:
    """Parse a two-port Touchstone v1 file written in RI, MA or DB format."""
    unit_scale = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
    scale, fmt, z_ref = 1e9, "MA", 50.0
    values: list[float] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("!", 1)[0].strip()
            if not line:
                continue
            if line.startswith("#"):
                tokens = iter(line[1:].upper().split())
                for tok in tokens:
                    if tok in unit_scale:
                        scale = unit_scale[tok]
                    elif tok in ("RI", "MA", "DB"):
                        fmt = tok
                    elif tok == "R":
                        z_ref = float(next(tokens))
                    elif tok != "S":
                        raise ValueError(f"unsupported option {tok!r} in {path}")
                continue
            values.extend(float(t) for t in line.split())
    if not values or len(values) % 9:
        raise ValueError(f"{path}: expected a multiple of 9 numeric values, got {len(values)}")
    data = np.array(values).reshape(-1, 9)
    a, b = data[:, 1::2], data[:, 2::2]
    if fmt == "RI":
        z = a + 1j * b
    elif fmt == "MA":
        z = a * np.exp(1j * np.deg2rad(b))
    else:
        z = 10 ** (a / 20) * np.exp(1j * np.deg2rad(b))
    s = np.empty((len(data), 2, 2), dtype=complex)
    s[:, 0, 0], s[:, 1, 0], s[:, 0, 1], s[:, 1, 1] = z.T
    return SParamSweep(freqs=data[:, 0] * scale, s=s, z_ref=(z_ref, z_ref))


def magnitude_db(x: np.ndarray) -> np.ndarray:
    """``20 log10 |x|`` clipped at ``DB_FLOOR``."""
    mag = np.abs(x)
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(mag), DB_FLOOR)


def csv_text(sweep: SParamSweep) -> str:
    _check_sweep(sweep)
    s11 = magnitude_db(sweep.s11)
    s21 = magnitude_db(sweep.s21)
    rows = ["freq_hz,s11_db,s21_db"]
    rows += [f"{f:.10g},{a:.9f},{b:.9f}" for f, a, b in zip(sweep.freqs, s11, s21)]
    return "\n".join(rows) + "\n"


def write_csv(sweep: SParamSweep, path: str | os.PathLike) -> Path:
    return atomic_write_text(path, csv_text(sweep))
