"""Uniform sampled grids, signals, and the continuous-Fourier convention.

The Fourier transform used everywhere in this package is

    F(f)(xi) = int f(x) exp(-2*pi*i*xi*x) dx,

approximated by a Riemann sum on the signal grid.  Grids always carry
physical coordinates (spacing and origin); there is no implicit
unit-spacing assumption anywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class GridMismatchError(ValueError):
    """Two signals (or a signal and an expected dual grid) disagree."""


@dataclass(frozen=True)
class SampledGrid:
    """Uniform 1-D grid: coordinates origin + k*spacing, k = 0..n-1."""

    n: int
    spacing: float
    origin: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 samples, got n={self.n}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError(f"grid spacing must be finite and > 0, got {self.spacing}")
        if not math.isfinite(self.origin):
            raise ValueError("grid origin must be finite")

    @property
    def coords(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n)

    @property
    def span(self) -> float:
        return self.spacing * (self.n - 1)

    def dual(self) -> "SampledGrid":
        """Frequency grid of the DFT on this grid, centered around 0."""
        dxi = 1.0 / (self.n * self.spacing)
        return SampledGrid(self.n, dxi, -(self.n // 2) * dxi)

    def isclose(self, other: "SampledGrid", rtol: float = 1e-9) -> bool:
        return (
            self.n == other.n
            and math.isclose(self.spacing, other.spacing, rel_tol=rtol)
            and abs(self.origin - other.origin) <= rtol * max(1.0, abs(self.origin))
        )

    @staticmethod
    def centered(n: int, spacing: float) -> "SampledGrid":
        return SampledGrid(n, spacing, -(n // 2) * spacing)


@dataclass(frozen=True)
class Signal:
    """Complex samples on a :class:`SampledGrid`."""

    grid: SampledGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1 or values.shape[0] != self.grid.n:
            raise ValueError(
                f"values must be 1-D of length {self.grid.n}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("signal contains non-finite values")
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        """L2 norm with the grid measure, sqrt(dt * sum |f|^2)."""
        return math.sqrt(self.grid.spacing) * float(np.linalg.norm(self.values))

    def __add__(self, other: "Signal") -> "Signal":
        _check_same_grid(self, other)
        return Signal(self.grid, self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        _check_same_grid(self, other)
        return Signal(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "Signal":
        return Signal(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Weight:
    """Polynomial frequency weight v_s(w) = (1 + |w|)^s."""

    s: float

    def __call__(self, omega) -> np.ndarray:
        return (1.0 + np.abs(omega)) ** self.s

    def mutual(self, omega, omega_star) -> np.ndarray:
        """w_s(w, w*) = max-ratio of v_s, equal to (ratio of 1+|.|)^{|s|}."""
        a = 1.0 + np.abs(omega)
        b = 1.0 + np.abs(omega_star)
        return np.maximum(a / b, b / a) ** abs(self.s)


def _check_same_grid(f: Signal, g: Signal):
    if not f.grid.isclose(g.grid):
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def forward_fourier(f: Signal) -> Signal:
    """Continuous Fourier transform by phase-corrected, scaled DFT.

    Output lives on ``f.grid.dual()``; values approximate
    dt * sum f(x_k) exp(-2*pi*i*xi*x_k).
    """
    grid = f.grid
    dual = grid.dual()
    k = np.arange(grid.n)
    # pre/post phases absorb the non-zero origins of both grids
    pre = np.exp(-2j * np.pi * dual.origin * grid.spacing * k)
    post = grid.spacing * np.exp(-2j * np.pi * dual.coords * grid.origin)
    return Signal(dual, post * np.fft.fft(f.values * pre))


def inverse_fourier(F: Signal, time_grid: SampledGrid | None = None) -> Signal:
    """Exact inverse of :func:`forward_fourier` (convention exp(+2*pi*i*xi*x)).

    ``time_grid`` defaults to the centered grid dual to ``F.grid``; if given,
    it must be a grid whose dual matches ``F.grid``.
    """
    fgrid = F.grid
    n = fgrid.n
    dt = 1.0 / (n * fgrid.spacing)
    if time_grid is None:
        time_grid = SampledGrid.centered(n, dt)
    if not time_grid.dual().isclose(fgrid):
        raise GridMismatchError(
            f"frequency grid {fgrid} is not the dual of time grid {time_grid}"
        )
    k = np.arange(n)
    pre = np.exp(2j * np.pi * fgrid.coords * time_grid.origin)
    post = np.exp(2j * np.pi * fgrid.origin * dt * k) / (n * dt)
    return Signal(time_grid, post * np.fft.ifft(F.values * pre) * n)


def inner_product(f: Signal, g: Signal) -> complex:
    """<f, g> = dt * sum f(x_k) * conj(g(x_k)); conjugate-linear in g."""
    _check_same_grid(f, g)
    return complex(f.grid.spacing * np.vdot(g.values, f.values))


def weighted_lp_norm(
    values: np.ndarray,
    x_grid: SampledGrid,
    omega_grid: SampledGrid,
    p: float,
    weight: Weight,
) -> float:
    """Quadrature approximation of the weighted L^p norm on an (x, w) grid.

    ``values[j, k]`` is F(x_k, w_j); the weight acts on the frequency
    coordinate only.  ``p = inf`` gives the weighted sup norm.
    """
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("empty grid")
    if values.shape != (omega_grid.n, x_grid.n):
        raise ValueError(
            f"values shape {values.shape} does not match grids "
            f"({omega_grid.n}, {x_grid.n})"
        )
    if not (p >= 1):
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    weighted = np.abs(values) * weight(omega_grid.coords)[:, None]
    if math.isinf(p):
        return float(weighted.max())
    cell = x_grid.spacing * omega_grid.spacing
    return float((cell * np.sum(weighted**p)) ** (1.0 / p))


# ---------------------------------------------------------------------------
# Signal file I/O: CSV or raw binary, with a JSON grid sidecar.


def _sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def _write_sidecar(path, grid: SampledGrid):
    _sidecar_path(path).write_text(
        json.dumps({"n": grid.n, "spacing": grid.spacing, "origin": grid.origin})
    )


def _read_sidecar(path) -> SampledGrid:
    meta = json.loads(_sidecar_path(path).read_text())
    return SampledGrid(int(meta["n"]), float(meta["spacing"]), float(meta["origin"]))


def save_signal_csv(f: Signal, path):
    """Two-column CSV (re, im) plus a JSON grid sidecar."""
    data = np.column_stack([f.values.real, f.values.imag])
    np.savetxt(path, data, delimiter=",", fmt="%.17g")
    _write_sidecar(path, f.grid)


def load_signal_csv(path) -> Signal:
    """Reads one-column (real) or two-column (re, im) CSV."""
    grid = _read_sidecar(path)
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] == 1:
        values = data[:, 0].astype(complex)
    elif data.shape[1] == 2:
        values = data[:, 0] + 1j * data[:, 1]
    else:
        raise ValueError(f"expected 1 or 2 CSV columns, got {data.shape[1]}")
    return Signal(grid, values)


def save_signal_raw(f: Signal, path):
    """Interleaved little-endian float64 (re, im) pairs, JSON sidecar."""
    interleaved = np.empty(2 * f.grid.n, dtype="<f8")
    interleaved[0::2] = f.values.real
    interleaved[1::2] = f.values.imag
    interleaved.tofile(path)
    _write_sidecar(path, f.grid)


def load_signal_raw(path) -> Signal:
    grid = _read_sidecar(path)
    interleaved = np.fromfile(path, dtype="<f8")
    if interleaved.size != 2 * grid.n:
        raise ValueError(
            f"raw file holds {interleaved.size} floats, expected {2 * grid.n}"
        )
    return Signal(grid, interleaved[0::2] + 1j * interleaved[1::2])
