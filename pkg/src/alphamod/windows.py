"""Window families with analytic time/frequency evaluators.

Each window exposes its time profile, its Fourier transform and the first
three frequency-side derivatives, plus a polynomial decay certificate
(r, C) meaning |psi_hat^(l)(xi)| <= C (1 + |xi|)^(-r) for all l up to
``max_deriv``.  The certificate is what the admissibility and
discretization threshold checks consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad as _scipy_quad
from scipy.interpolate import BSpline, CubicSpline

from .grids import SampledGrid, Signal, forward_fourier

_TAYLOR_CUT = 1e-3  # |xi| below which sinc derivatives switch to series


class Purpose(Enum):
    ADMISSIBILITY = "admissibility"
    KERNEL_INTEGRABILITY = "kernel_integrability"
    DISCRETIZATION = "discretization"


@dataclass(frozen=True)
class HypothesisVerdict:
    purpose: Purpose
    alpha: float
    s: float
    required_r: float
    certified_r: float

    @property
    def passed(self) -> bool:
        return self.certified_r > self.required_r


class Window:
    """Immutable window with analytic evaluators.

    Parameters
    ----------
    kind : str
        One of "bspline", "gaussian", "bump", "bandlimited".
    time_fn : callable
        Vectorized psi(t).
    fourier_fn : callable
        Vectorized (xi, l) -> psi_hat^(l)(xi), l = 0..max_deriv.
    l2_norm : float
    max_deriv : int
    decay_certificate : (r, C) or None
    support : (a, b) or None
        Exact time support, when compact.
    freq_support : (a, b) or None
        Exact frequency support, when compact.
    """

    def __init__(self, kind, label, time_fn, fourier_fn, l2_norm,
                 max_deriv=3, decay_certificate=None, support=None,
                 freq_support=None, is_real=True):
        if not l2_norm > 0:
            raise ValueError("window must have positive L2 norm")
        self.kind = kind
        self.label = label
        self._time = time_fn
        self._fourier = fourier_fn
        self.l2_norm = float(l2_norm)
        self.max_deriv = int(max_deriv)
        self.decay_certificate = decay_certificate
        self.support = support
        self.freq_support = freq_support
        self.is_real = is_real

    def __repr__(self):
        return f"Window({self.label!r})"

    def time(self, t):
        return self._time(np.asarray(t, dtype=float))

    def fourier(self, xi, deriv: int = 0):
        if not 0 <= deriv <= self.max_deriv:
            raise ValueError(
                f"derivative order {deriv} not available (max {self.max_deriv})"
            )
        return self._fourier(np.asarray(xi, dtype=float), deriv)

    def sample(self, grid: SampledGrid) -> Signal:
        return Signal(grid, np.asarray(self.time(grid.coords), dtype=complex))


def eval_fourier_deriv(w: Window, l: int, xi):
    """psi_hat^(l)(xi); rejects l beyond the window's evaluable order."""
    return w.fourier(xi, deriv=l)


# ---------------------------------------------------------------------------
# sinc and its first three derivatives (for B-spline spectra)


def _sinc_derivs(xi: np.ndarray):
    """Returns [s, s', s'', s'''] of sinc(xi) = sin(pi xi)/(pi xi)."""
    xi = np.asarray(xi, dtype=float)
    u = np.pi * xi
    small = np.abs(xi) < _TAYLOR_CUT
    us = np.where(small, 1.0, u)  # dummy to avoid divide warnings

    sin_u, cos_u = np.sin(us), np.cos(us)
    inv = 1.0 / us
    inv2, inv3, inv4 = inv**2, inv**3, inv**4
    g0 = sin_u * inv
    g1 = cos_u * inv - sin_u * inv2
    g2 = -sin_u * inv - 2 * cos_u * inv2 + 2 * sin_u * inv3
    g3 = -cos_u * inv + 3 * sin_u * inv2 + 6 * cos_u * inv3 - 6 * sin_u * inv4

    # series sum_j (-1)^j u^{2j} / (2j+1)!  differentiated k times
    u_small = np.where(small, u, 0.0)
    series = [np.zeros_like(u), np.zeros_like(u),
              np.zeros_like(u), np.zeros_like(u)]
    for j in range(8):
        term = (-1.0) ** j / math.factorial(2 * j + 1)
        for k in range(4):
            if 2 * j - k < 0:
                continue
            coeff = term * math.prod(range(2 * j - k + 1, 2 * j + 1))
            series[k] = series[k] + coeff * u_small ** (2 * j - k)

    pi_pow = [np.pi**k for k in range(4)]
    out = []
    for k, (g, ser) in enumerate(zip([g0, g1, g2, g3], series)):
        out.append(np.where(small, ser, g) * pi_pow[k])
    return out


def _sinc_power_derivs(xi: np.ndarray, m: int):
    """[f, f', f'', f'''] for f = sinc^m by Leibniz/chain expansion."""
    s0, s1, s2, s3 = _sinc_derivs(xi)

    def pw(p):
        # s0**p with the convention 0**0 = 1; p is always >= 0 here
        return s0**p if p > 0 else np.ones_like(s0)

    f0 = pw(m)
    f1 = m * pw(m - 1) * s1
    f2 = m * pw(m - 1) * s2
    if m >= 2:
        f2 = f2 + m * (m - 1) * pw(m - 2) * s1**2
    f3 = m * pw(m - 1) * s3
    if m >= 2:
        f3 = f3 + 3 * m * (m - 1) * pw(m - 2) * s1 * s2
    if m >= 3:
        f3 = f3 + m * (m - 1) * (m - 2) * pw(m - 3) * s1**3
    return [f0, f1, f2, f3]


def _certify_constant(fourier_fn, r: float, max_deriv: int,
                      xi_max: float = 200.0, n: int = 4001) -> float:
    """Smallest C with max_l |psi_hat^(l)| <= C (1+|xi|)^(-r) on a test grid."""
    xi = np.linspace(0.0, xi_max, n)
    env = np.max(
        [np.abs(fourier_fn(xi, l)) for l in range(max_deriv + 1)], axis=0
    )
    if math.isinf(r):
        return float(env.max())
    return float(np.max(env * (1.0 + xi) ** r))


# ---------------------------------------------------------------------------
# window constructors


def bspline_window(m: int) -> Window:
    """Centered cardinal B-spline of order m; spectrum sinc(xi)^m."""
    if m < 1:
        raise ValueError(f"B-spline order must be >= 1, got {m}")
    m = int(m)
    basis = BSpline.basis_element(np.arange(m + 1) - m / 2.0, extrapolate=False)
    half = m / 2.0

    def time_fn(t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) < half
        out = np.zeros_like(t)
        if np.any(inside):
            out[inside] = np.nan_to_num(basis(t[inside]))
        return out

    def fourier_fn(xi, l):
        return _sinc_power_derivs(xi, m)[l]

    # ||B_m||^2 = (B_m * B_m)(0) = B_{2m}(0), the centered order-2m spline
    b2m = BSpline.basis_element(np.arange(2 * m + 1) - float(m))
    l2 = math.sqrt(float(b2m(0.0)))
    C = _certify_constant(fourier_fn, float(m), 3)
    return Window(
        "bspline", f"bspline:{m}", time_fn, fourier_fn, l2,
        max_deriv=3, decay_certificate=(float(m), C), support=(-half, half),
    )


def gaussian_window() -> Window:
    """Unit-norm Gaussian 2^(1/4) exp(-pi t^2); its own Fourier transform."""
    c = 2.0**0.25

    def time_fn(t):
        return c * np.exp(-np.pi * np.asarray(t, dtype=float) ** 2)

    def fourier_fn(xi, l):
        xi = np.asarray(xi, dtype=float)
        base = c * np.exp(-np.pi * xi**2)
        if l == 0:
            poly = 1.0
        elif l == 1:
            poly = -2.0 * np.pi * xi
        elif l == 2:
            poly = 4.0 * np.pi**2 * xi**2 - 2.0 * np.pi
        else:
            poly = -8.0 * np.pi**3 * xi**3 + 12.0 * np.pi**2 * xi
        return poly * base

    return Window(
        "gaussian", "gaussian", time_fn, fourier_fn, 1.0,
        max_deriv=3, decay_certificate=(math.inf, c),
    )


def bump_window(radius: float, band: float = 128.0,
                table_size: int = 2**16) -> Window:
    """Compactly supported C-infinity bump, L2-normalized.

    The spectrum has no closed form; psi_hat^(l) is tabulated on a dense
    grid over [-band, band] via the transform of (-2*pi*i*t)^l psi(t) and
    interpolated cubically.  Beyond the band the (super-polynomially tiny)
    tail is treated as zero.
    """
    if not radius > 0:
        raise ValueError(f"bump radius must be > 0, got {radius}")
    R = float(radius)

    def raw(t):
        t = np.asarray(t, dtype=float)
        u = t / R
        inside = np.abs(u) < 1.0
        out = np.zeros_like(t)
        ui = u[inside]
        out[inside] = np.exp(-1.0 / (1.0 - ui**2))
        return out

    norm2 = R * _scipy_quad(lambda u: math.exp(-2.0 / (1.0 - u * u)),
                            -1.0, 1.0)[0]
    scale = 1.0 / math.sqrt(norm2)

    def time_fn(t):
        return scale * raw(t)

    # dense spectral table: psi_hat^(l) = F[(-2 pi i t)^l psi]
    dxi = 2.0 * band / table_size
    tgrid = SampledGrid.centered(table_size, 1.0 / (table_size * dxi))
    t = tgrid.coords
    base = time_fn(t)
    splines = []
    for l in range(4):
        mom = Signal(tgrid, ((-2j * np.pi * t) ** l * base).astype(complex))
        spec = forward_fourier(mom)
        # psi real and even, so every psi_hat^(l) is real-valued
        splines.append(CubicSpline(spec.grid.coords, spec.values.real))

    def fourier_fn(xi, l):
        xi = np.asarray(xi, dtype=float)
        inside = np.abs(xi) < band - 1.0
        out = np.zeros(xi.shape, dtype=float)
        if np.any(inside):
            out[inside] = splines[l](xi[inside])
        return out

    w = Window(
        "bump", f"bump:{radius:g}", time_fn, fourier_fn,
        1.0, max_deriv=3, support=(-R, R),
    )
    r_hat, _ = estimate_decay_rate(w, 3, 100.0)
    r_cert = 0.9 * r_hat  # fitted exponents are optimistic
    C = _certify_constant(fourier_fn, r_cert, 3, xi_max=band - 1.0)
    w.decay_certificate = (r_cert, C)
    return w


def bandlimited_window(cutoff: float) -> Window:
    """Squared raised-cosine spectrum on [-cutoff, cutoff]; C^3 in frequency.

    psi_hat(xi) = ((1 + cos(pi xi / cutoff)) / 2)^2 inside the band and
    exactly zero outside; the time profile is the closed-form inverse
    transform (a combination of sinc terms).
    """
    if not cutoff > 0:
        raise ValueError(f"cutoff must be > 0, got {cutoff}")
    c = float(cutoff)
    a = np.pi / c

    def fourier_fn(xi, l):
        xi = np.asarray(xi, dtype=float)
        inside = np.abs(xi) < c
        out = np.zeros_like(xi)
        x = xi[inside]
        q = 0.5 * (1.0 + np.cos(a * x))
        q1 = -0.5 * a * np.sin(a * x)
        q2 = -0.5 * a**2 * np.cos(a * x)
        q3 = 0.5 * a**3 * np.sin(a * x)
        if l == 0:
            out[inside] = q**2
        elif l == 1:
            out[inside] = 2 * q * q1
        elif l == 2:
            out[inside] = 2 * q1**2 + 2 * q * q2
        else:
            out[inside] = 6 * q1 * q2 + 2 * q * q3
        return out

    def _pair(freq, b):
        # int_{-c}^{c} cos(freq*xi) cos(b*xi) dxi, stable near freq = b
        return c * (np.sinc((freq - b) * c / np.pi)
                    + np.sinc((freq + b) * c / np.pi))

    def time_fn(t):
        t = np.asarray(t, dtype=float)
        b = 2.0 * np.pi * t
        # (1+cos u)^2/4 = 3/8 + cos(u)/2 + cos(2u)/8 with u = pi xi / c
        return (0.375 * _pair(0.0, b) + 0.5 * _pair(a, b)
                + 0.125 * _pair(2 * a, b))

    l2 = math.sqrt(35.0 * c / 64.0)  # closed form of int |psi_hat|^2
    C = _certify_constant(fourier_fn, math.inf, 3, xi_max=c)
    return Window(
        "bandlimited", f"bandlimited:{cutoff:g}", time_fn, fourier_fn, l2,
        max_deriv=3, decay_certificate=(math.inf, C), freq_support=(-c, c),
    )


# ---------------------------------------------------------------------------
# decay certification and theorem thresholds


def estimate_decay_rate(w: Window, l_max: int, xi_range: float,
                        n_grid: int = 16001):
    """Least-squares fit of the spectral envelope decay exponent.

    Fits log max_l |psi_hat^(l)(xi)| against -r log(1 + xi) on the local
    maxima of the envelope for xi in [1, xi_range], then raises the
    constant so the bound holds on the whole test grid.  Returns
    (r_hat, C_hat).
    """
    if xi_range < 10:
        raise ValueError("xi_range must be >= 10")
    xi = np.linspace(0.0, xi_range, n_grid)
    env = np.max(
        [np.abs(w.fourier(xi, l)) for l in range(min(l_max, w.max_deriv) + 1)],
        axis=0,
    )
    if not np.any(env > 0):
        raise ValueError("all-zero spectrum")
    floor = 1e-12 * env.max()  # below this the table/FFT noise dominates
    peaks = (env[1:-1] >= env[:-2]) & (env[1:-1] >= env[2:])
    mask = np.zeros_like(env, dtype=bool)
    mask[1:-1] = peaks
    mask &= (xi >= 1.0) & (env > floor)
    if mask.sum() < 3:
        mask = (xi >= 1.0) & (env > floor)
    # fit the upper half of the usable range: the pre-asymptotic region
    # flattens the slope for super-polynomially decaying spectra
    xi_hi = xi[mask].max()
    tail = mask & (xi >= max(1.0, 0.5 * xi_hi))
    if tail.sum() >= 3:
        mask = tail
    logx = np.log1p(xi[mask])
    logy = np.log(env[mask])
    slope, intercept = np.polyfit(logx, logy, 1)
    r_hat = -float(slope)
    usable = env > floor
    c_hat = float(np.max(env[usable] * (1.0 + xi[usable]) ** r_hat))
    return r_hat, c_hat


def required_decay(purpose: Purpose, alpha: float, s: float = 0.0) -> float:
    """Decay exponent threshold of the corresponding theorem."""
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if purpose is Purpose.ADMISSIBILITY:
        return max(1.0, alpha / (2.0 * (1.0 - alpha)))
    base = (2.0 + 2.0 * s + 7.0 * alpha - 4.0 * alpha**2) / (
        2.0 * (1.0 - alpha) ** 2
    )
    if purpose is Purpose.KERNEL_INTEGRABILITY:
        return base
    if purpose is Purpose.DISCRETIZATION:
        return base + 1.0
    raise ValueError(f"unknown purpose {purpose}")


def check_hypotheses(w: Window, alpha: float, s: float, purpose: Purpose,
                     estimate_if_missing: bool = False) -> HypothesisVerdict:
    """Compares the window's decay certificate to the theorem threshold."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    req = required_decay(purpose, alpha, s)
    if w.decay_certificate is not None:
        certified = w.decay_certificate[0]
    elif estimate_if_missing:
        certified = 0.9 * estimate_decay_rate(w, w.max_deriv, 100.0)[0]
    else:
        raise ValueError(
            f"window {w.label} has no decay certificate and estimation "
            "is disabled"
        )
    return HypothesisVerdict(purpose, alpha, s, req, certified)


def parse_window_spec(spec: str) -> Window:
    """Window from a CLI spec string, e.g. "bspline:4" or "gaussian"."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "gaussian":
        if arg:
            raise ValueError("gaussian takes no parameter")
        return gaussian_window()
    if name == "bspline":
        return bspline_window(int(arg))
    if name == "bump":
        return bump_window(float(arg))
    if name == "bandlimited":
        return bandlimited_window(float(arg))
    raise ValueError(f"unknown window spec {spec!r}")
