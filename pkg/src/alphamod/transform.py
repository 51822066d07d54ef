"""Time-frequency atoms, voice and dual transforms, reproducing kernel.

Atoms are the unit-norm waveforms

    a_{x,w}(t) = exp(2*pi*i*w*(t-x)) * beta(w)^(-1/2) * psi((t-x)/beta(w)),

i.e. a translation, modulation and frequency-dependent dilation of the
window.  The voice transform collects <f, a_{x,w}> on a rectangular
(x, w) grid; the dual transform first inverts the analysis multiplier.
Atoms are always evaluated analytically on the signal grid, never by
resampling a stored discrete window: the dilation rate beta(w) is not an
integer ratio and resampling would leak interpolation error into every
identity checked downstream.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .grids import (Signal, SampledGrid, Weight, inner_product,
                    weighted_lp_norm)
from .quadrature import QuadratureConfig, adaptive_quad
from .symbol import NotAdmissibleError, SymbolTable, apply_multiplier, beta
from .windows import Window


class SupportSpillWarning(UserWarning):
    """Atom mass leaking past the signal grid exceeds the tolerance."""


class MassCaptureError(ValueError):
    """The (x, w) grid captures too little of the transform's energy."""

    def __init__(self, captured: float, required: float):
        super().__init__(
            f"grid captures {captured:.5f} of the signal energy, "
            f"need >= {required}"
        )
        self.captured = captured


@dataclass(frozen=True)
class VoiceMap:
    """values[j, k] = transform at (x_grid[k], omega_grid[j])."""

    x_grid: SampledGrid
    omega_grid: SampledGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.omega_grid.n, self.x_grid.n):
            raise ValueError(
                f"values shape {values.shape}, expected "
                f"({self.omega_grid.n}, {self.x_grid.n})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("voice map contains non-finite values")
        object.__setattr__(self, "values", values)

    def norm(self, p: float = 2.0, s: float = 0.0) -> float:
        return weighted_lp_norm(self.values, self.x_grid, self.omega_grid,
                                p, Weight(s))

    def save(self, path):
        """Raw complex128 matrix plus a JSON sidecar with both grids."""
        np.asarray(self.values, dtype="<c16").tofile(path)
        meta = {
            "x_grid": {"n": self.x_grid.n, "spacing": self.x_grid.spacing,
                       "origin": self.x_grid.origin},
            "omega_grid": {"n": self.omega_grid.n,
                           "spacing": self.omega_grid.spacing,
                           "origin": self.omega_grid.origin},
        }
        Path(str(path) + ".json").write_text(json.dumps(meta))

    @staticmethod
    def load(path) -> "VoiceMap":
        meta = json.loads(Path(str(path) + ".json").read_text())
        gx = SampledGrid(**meta["x_grid"])
        gw = SampledGrid(**meta["omega_grid"])
        values = np.fromfile(path, dtype="<c16").reshape(gw.n, gx.n)
        return VoiceMap(gx, gw, values)

    def save_magnitude_csv(self, path):
        np.savetxt(path, np.abs(self.values), delimiter=",", fmt="%.8e")


def make_atom(w: Window, alpha: float, x: float, omega: float,
              grid: SampledGrid, spill_tol: float = 1e-6) -> Signal:
    """T_x M_w D_beta psi sampled on the grid; warns when more than
    spill_tol of the atom's mass lies outside the grid."""
    b = beta(omega, alpha)
    u = grid.coords - x
    values = np.exp(2j * np.pi * omega * u) * w.time(u / b) / math.sqrt(b)
    mass = grid.spacing * float(np.sum(np.abs(values) ** 2))
    spill = 1.0 - mass / w.l2_norm**2
    if spill > spill_tol:
        warnings.warn(
            f"atom at (x={x}, w={omega}) spills {spill:.2e} of its mass "
            f"past the grid", SupportSpillWarning, stacklevel=2,
        )
    return Signal(grid, values)


def _atom_rows(w: Window, alpha: float, omega: float, xs: np.ndarray,
               grid: SampledGrid) -> np.ndarray:
    """Matrix A[m, k] = a_{x_m, omega}(t_k) for one frequency row."""
    b = beta(omega, alpha)
    u = grid.coords[None, :] - np.asarray(xs)[:, None]
    prof = w.time((u / b).ravel()).reshape(u.shape)
    return np.exp(2j * np.pi * omega * u) * prof / math.sqrt(b)


def _aligned_shifts(x_grid: SampledGrid, t_grid: SampledGrid):
    """Integer sample shifts of the x nodes on the signal grid, or None."""
    dt = t_grid.spacing
    shifts = (x_grid.coords - t_grid.origin) / dt
    rounded = np.rint(shifts)
    if np.max(np.abs(shifts - rounded)) < 1e-9:
        return rounded.astype(int)
    return None


def _voice_row_fft(f: Signal, w: Window, alpha: float, omega: float,
                   shifts: np.ndarray) -> np.ndarray:
    """One frequency row by FFT cross-correlation; x nodes must sit on
    the signal lattice (integer sample shifts)."""
    b = beta(omega, alpha)
    dt = f.grid.spacing
    n = f.grid.n
    j_lo = -int(shifts.max())
    j_hi = (n - 1) - int(shifts.min())
    j = np.arange(j_lo, j_hi + 1)
    atom = np.exp(2j * np.pi * omega * j * dt) * w.time(j * dt / b) \
        / math.sqrt(b)
    h = np.conj(atom)
    full = fftconvolve(f.values, h[::-1])
    idx = shifts + j_lo + h.size - 1
    return dt * full[idx]


def voice_transform(f: Signal, w: Window, alpha: float,
                    x_grid: SampledGrid, omega_grid: SampledGrid,
                    method: str = "auto") -> VoiceMap:
    """V f(x, w) = <f, a_{x,w}> on the product grid.

    method "fft" uses per-row FFT cross-correlation (x nodes must lie on
    the signal lattice), "direct" uses explicit inner products; "auto"
    picks fft whenever the lattice alignment holds.
    """
    if method not in ("auto", "fft", "direct"):
        raise ValueError(f"unknown method {method!r}")
    shifts = _aligned_shifts(x_grid, f.grid)
    if method == "fft" and shifts is None:
        raise ValueError("fft path needs x nodes on the signal lattice")
    use_fft = method != "direct" and shifts is not None
    xs = x_grid.coords
    rows = np.empty((omega_grid.n, x_grid.n), dtype=complex)
    for jj, omega in enumerate(omega_grid.coords):
        if use_fft:
            rows[jj] = _voice_row_fft(f, w, alpha, float(omega), shifts)
        else:
            A = _atom_rows(w, alpha, float(omega), xs, f.grid)
            rows[jj] = f.grid.spacing * (A.conj() @ f.values)
    return VoiceMap(x_grid, omega_grid, rows)


def synthesize_voice(vm: VoiceMap, w: Window, alpha: float,
                     grid: SampledGrid) -> Signal:
    """Riemann sum of the inverse pairing:
    g = sum V(x, w) a_{x,w} dx dw over the voice grid."""
    cell = vm.x_grid.spacing * vm.omega_grid.spacing
    out = np.zeros(grid.n, dtype=complex)
    for jj, omega in enumerate(vm.omega_grid.coords):
        A = _atom_rows(w, alpha, float(omega), vm.x_grid.coords, grid)
        out += vm.values[jj] @ A
    return Signal(grid, cell * out)


def dual_transform(f: Signal, w: Window, alpha: float, tab: SymbolTable,
                   x_grid: SampledGrid, omega_grid: SampledGrid,
                   method: str = "auto") -> VoiceMap:
    """W f = V(A^{-1} f): the voice transform after inverting the
    analysis multiplier."""
    if not tab.admissible:
        raise NotAdmissibleError("dual transform needs an admissible window")
    g = apply_multiplier(f, tab, -1)
    return voice_transform(g, w, alpha, x_grid, omega_grid, method)


def kernel_K(w1: Window, w2: Window, alpha: float, tab: SymbolTable,
             kappa: int, p1, p2,
             quad: QuadratureConfig = QuadratureConfig()) -> complex:
    """K(p1, p2) = <m^{-kappa} hat(a1), hat(a2)> for atoms of the two
    windows at p1 = (x, w), p2 = (x*, w*); frequency-domain quadrature."""
    if kappa > 0 and not tab.admissible:
        raise NotAdmissibleError("m^{-kappa} needs a positive lower bound A")
    x1, w_1 = p1
    x2, w_2 = p2
    b1 = beta(w_1, alpha)
    b2 = beta(w_2, alpha)
    dx = x1 - x2
    scale = math.sqrt(b1 * b2)

    def integrand(xi):
        g = scale * w1.fourier(b1 * (xi - w_1)) \
            * np.conj(w2.fourier(b2 * (xi - w_2)))
        if kappa:
            g = g * tab(xi) ** (-kappa)
        return g * np.exp(-2j * np.pi * xi * dx)

    # integrand support is a neighborhood of the two atom frequencies
    half = 60.0 / min(b1, b2) + abs(w_1 - w_2)
    lo = min(w_1, w_2) - half
    hi = max(w_1, w_2) + half
    value, _ = adaptive_quad(integrand, lo, hi, tol=quad.tol,
                             points=(w_1, w_2),
                             max_panels=quad.max_panels)
    return complex(value)


def reproducing_kernel(w: Window, alpha: float, tab: SymbolTable,
                       p1, p2,
                       quad: QuadratureConfig = QuadratureConfig()) -> complex:
    """R(p1, p2) = <A^{-1} a_{p1}, a_{p2}>."""
    return kernel_K(w, w, alpha, tab, 1, p1, p2, quad)


def check_reproducing(f: Signal, w: Window, alpha: float, tab: SymbolTable,
                      x_grid: SampledGrid, omega_grid: SampledGrid,
                      mass_threshold: float = 0.999) -> float:
    """Relative L2 residual of the discretized reproducing identity
    V f = integral of V f(y) R(y, .) dmu(y).

    The kernel integral is evaluated as V(A^{-1} synthesize(V f)), which
    is the same operator applied with two FFT passes instead of a dense
    kernel matrix.  Rejects grids capturing less than mass_threshold of
    ||f||^2 in the pairing <V f, W f> dmu.
    """
    fnorm = f.norm()
    if fnorm == 0.0:
        return 0.0
    V = voice_transform(f, w, alpha, x_grid, omega_grid)
    Wm = dual_transform(f, w, alpha, tab, x_grid, omega_grid)
    cell = x_grid.spacing * omega_grid.spacing
    captured = float(np.real(cell * np.vdot(Wm.values, V.values))) / fnorm**2
    if captured < mass_threshold:
        raise MassCaptureError(captured, mass_threshold)
    g = synthesize_voice(V, w, alpha, f.grid)
    g = apply_multiplier(g, tab, -1)
    V2 = voice_transform(g, w, alpha, x_grid, omega_grid)
    num = float(np.linalg.norm(V2.values - V.values))
    den = float(np.linalg.norm(V.values))
    return num / den


def coorbit_norm(f: Signal, w: Window, alpha: float, tab: SymbolTable,
                 p: float, s: float,
                 x_grid: SampledGrid, omega_grid: SampledGrid) -> float:
    """Discretized ||V f||_{L^p} with frequency weight (1+|w|)^s."""
    if not tab.admissible:
        raise NotAdmissibleError("coorbit norm needs an admissible window")
    vm = voice_transform(f, w, alpha, x_grid, omega_grid)
    return weighted_lp_norm(vm.values, x_grid, omega_grid, p, Weight(s))
