"""The admissibility symbol m_psi, its derivatives, and the multiplier.

The analysis operator of the alpha-modulation system acts as a Fourier
multiplier with real symbol

    m_psi(xi) = int |psi_hat(beta(w)(xi - w))|^2 beta(w) dw,
    beta(w) = (1 + |w|)^(-alpha),

and the window is admissible exactly when 0 < A <= m_psi <= B < inf.
The integrand is sharply localized near w = xi and (for alpha*|xi| > 1)
has a secondary structure at the critical point of r_xi(w) =
beta(w)(xi - w); panels are anchored there.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .grids import Signal, SampledGrid, forward_fourier, inverse_fourier
from .quadrature import QuadratureConfig, QuadratureError, adaptive_quad
from .windows import Window


class CriticalPointNotApplicable(ValueError):
    """r_xi has no interior critical point for this (xi, alpha)."""


class NotAdmissibleError(ValueError):
    """Operation needs an invertible multiplier (A > 0)."""


def beta(omega, alpha: float):
    """beta(w) = (1 + |w|)^(-alpha); even, values in (0, 1]."""
    _check_alpha(alpha)
    return (1.0 + np.abs(omega)) ** (-alpha)


def r_xi(xi, omega, alpha: float):
    """r_xi(w) = beta(w) (xi - w)."""
    return beta(omega, alpha) * (xi - omega)


def _check_alpha(alpha: float):
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")


@dataclass(frozen=True)
class RxiProfile:
    """Critical structure of w -> r_xi(w) for xi > 2/alpha."""

    xi: float
    omega_star: float  # interior local minimum, < 0
    min_value: float   # r_xi(omega_star)
    max_value: float   # r_xi(0) = xi


def rxi_profile(xi: float, alpha: float) -> RxiProfile:
    _check_alpha(alpha)
    if alpha == 0 or xi <= 2.0 / alpha:
        raise CriticalPointNotApplicable(
            f"closed-form extrema require xi > 2/alpha, got xi={xi}, "
            f"alpha={alpha}"
        )
    omega_star = (1.0 - alpha * xi) / (1.0 - alpha)
    min_value = alpha ** (-alpha) * ((xi - 1.0) / (1.0 - alpha)) ** (1.0 - alpha)
    return RxiProfile(xi, omega_star, min_value, float(xi))


def _breakpoints(xi: float, alpha: float):
    """Panel anchors: 0, xi, and the interior critical point of r_xi."""
    pts = {0.0, float(xi)}
    if alpha > 0 and alpha * abs(xi) > 1.0:
        w_star = (1.0 - alpha * abs(xi)) / (1.0 - alpha)
        pts.add(math.copysign(abs(w_star), -xi) if xi != 0 else w_star)
    return pts


def _integrate_symbol(integrand, xi, alpha, quad: QuadratureConfig):
    """Adaptive quadrature with tail-doubling truncation control.

    Integrates in the warped variable y with omega(y) = sign(y) *
    ((1 + (1 - alpha)|y|)^(1/(1-alpha)) - 1).  The warp's Jacobian is
    1/beta(omega), so the beta-scaled window argument grows linearly in
    y and the tails decay at window speed for every alpha; in the raw
    omega variable they thin out only on scales |omega|^(1-alpha).
    """
    c = 1.0 - alpha

    def warp(y):
        y = np.asarray(y, dtype=float)
        return np.sign(y) * ((1.0 + c * np.abs(y)) ** (1.0 / c) - 1.0)

    def warp_inv(om):
        return math.copysign(((1.0 + abs(om)) ** c - 1.0) / c, om)

    def g(y):
        y = np.asarray(y, dtype=float)
        jac = (1.0 + c * np.abs(y)) ** (alpha / c)  # = 1/beta(omega(y))
        return integrand(warp(y)) * jac

    radius = abs(warp_inv(xi)) + 50.0
    pts = {warp_inv(p) for p in _breakpoints(xi, alpha)}
    value, err = adaptive_quad(g, -radius, radius, tol=quad.tol,
                               points=pts, max_panels=quad.max_panels)
    # enlarge the domain until the discarded tails are provably negligible
    for _ in range(12):
        bigger = 2.0 * radius
        left, el = adaptive_quad(g, -bigger, -radius,
                                 tol=quad.tol, max_panels=quad.max_panels)
        right, er = adaptive_quad(g, radius, bigger,
                                  tol=quad.tol, max_panels=quad.max_panels)
        value += left + right
        err += el + er
        radius = bigger
        if abs(left) + abs(right) < quad.tol / 10.0:
            return float(value), float(err)
    raise QuadratureError(
        f"tails of the symbol integral at xi={xi} did not decay within "
        f"warped radius {radius}", value=float(value), error=float(err),
    )


def symbol_m(w: Window, alpha: float, xi: float,
             quad: QuadratureConfig = QuadratureConfig()) -> float:
    """m_psi(xi) by adaptive quadrature (absolute tolerance quad.tol)."""
    _check_alpha(alpha)

    def integrand(omega):
        b = beta(omega, alpha)
        return np.abs(w.fourier(b * (xi - omega))) ** 2 * b

    value, _ = _integrate_symbol(integrand, xi, alpha, quad)
    return value


def symbol_m_deriv(w: Window, alpha: float, xi: float, l: int,
                   quad: QuadratureConfig = QuadratureConfig()) -> float:
    """l-th derivative of the symbol (l = 1, 2), differentiated under
    the integral: m' integrates 2 Re(psi_hat' conj(psi_hat)) beta^2."""
    _check_alpha(alpha)
    if l not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {l}")
    if w.max_deriv < l:
        raise ValueError(f"window {w.label} supports derivatives up to "
                         f"{w.max_deriv}")

    def integrand(omega):
        b = beta(omega, alpha)
        r = b * (xi - omega)
        f0 = w.fourier(r)
        f1 = w.fourier(r, 1)
        if l == 1:
            return 2.0 * np.real(f1 * np.conj(f0)) * b**2
        f2 = w.fourier(r, 2)
        return (2.0 * np.real(f2 * np.conj(f0))
                + 2.0 * np.abs(f1) ** 2) * b**3

    value, _ = _integrate_symbol(integrand, xi, alpha, quad)
    return value


@dataclass(frozen=True)
class ScanConfig:
    xi_max: float = 200.0
    n_nodes: int = 2001
    tol: float = 1e-8
    tail_margin: float = 0.05


@dataclass
class SymbolTable:
    """m_psi sampled on a symmetric xi grid, with tail metadata."""

    xi_grid: SampledGrid
    values: np.ndarray
    tail_value: float  # ||psi||^2, the xi -> inf limit of the symbol
    A: float
    B: float
    alpha: float
    window_label: str = ""
    tol: float = 1e-8
    _spline: CubicSpline | None = field(default=None, repr=False)

    @property
    def admissible(self) -> bool:
        return self.A > 0

    def __call__(self, xi):
        """Cubic interpolation on the table; tail value beyond it."""
        if self._spline is None:
            self._spline = CubicSpline(self.xi_grid.coords, self.values)
        xi = np.asarray(xi, dtype=float)
        lo, hi = self.xi_grid.coords[0], self.xi_grid.coords[-1]
        out = np.where(
            (xi >= lo) & (xi <= hi),
            self._spline(np.clip(xi, lo, hi)),
            self.tail_value,
        )
        return out

    def report(self) -> dict:
        return {
            "alpha": self.alpha,
            "window": self.window_label,
            "A": self.A,
            "B": self.B,
            "admissible": self.admissible,
            "xi_max": float(self.xi_grid.coords[-1]),
            "tol": self.tol,
        }

    def save_csv(self, path):
        np.savetxt(path,
                   np.column_stack([self.xi_grid.coords, self.values]),
                   delimiter=",", fmt="%.17g", header="xi,m", comments="")

    def save_report(self, path):
        with open(path, "w") as fh:
            json.dump(self.report(), fh, indent=2)


def _n_workers() -> int:
    env = os.environ.get("ALPHAMOD_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def admissibility_scan(w: Window, alpha: float,
                       scan: ScanConfig = ScanConfig()) -> SymbolTable:
    """Samples m_psi on [-xi_max, xi_max] and extracts frame-type bounds.

    For real windows the symbol is even, so only xi >= 0 is computed and
    mirrored.  A and B fold in the tail limit ||psi||^2 (with the scan's
    tail margin) since the symbol approaches it for large |xi|.
    """
    _check_alpha(alpha)
    if scan.n_nodes % 2 == 0:
        raise ValueError("n_nodes must be odd so that xi = 0 is a node")
    grid = SampledGrid(scan.n_nodes, 2.0 * scan.xi_max / (scan.n_nodes - 1),
                       -scan.xi_max)
    xi_all = grid.coords
    quad = QuadratureConfig(tol=scan.tol)
    half = scan.n_nodes // 2
    targets = xi_all[half:] if w.is_real else xi_all

    def one(xi):
        try:
            return symbol_m(w, alpha, float(xi), quad)
        except QuadratureError as exc:
            raise QuadratureError(
                f"symbol quadrature failed at xi={xi}: {exc}",
                value=exc.value, error=exc.error,
            ) from exc

    workers = _n_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = np.array(list(pool.map(one, targets)))
    else:
        vals = np.array([one(xi) for xi in targets])

    if w.is_real:
        values = np.concatenate([vals[:0:-1], vals])  # m(-xi) = m(xi)
    else:
        values = vals
    tail = w.l2_norm**2
    A = min(float(values.min()), tail * (1.0 - scan.tail_margin))
    B = max(float(values.max()), tail * (1.0 + scan.tail_margin))
    return SymbolTable(grid, values, tail, A, B, alpha,
                       window_label=w.label, tol=scan.tol)


def apply_multiplier(f: Signal, tab: SymbolTable, kappa: int) -> Signal:
    """inverse_fourier(m^kappa * f_hat); kappa < 0 needs A > 0."""
    if kappa < 0 and not tab.admissible:
        raise NotAdmissibleError(
            "multiplier with negative power needs a positive lower bound A"
        )
    if kappa == 0:
        return Signal(f.grid, f.values.copy())
    F = forward_fourier(f)
    m = tab(F.grid.coords)
    return inverse_fourier(Signal(F.grid, F.values * m**kappa), f.grid)
