"""Desk-scale estimators for the quantities gating frame discretization.

The theory needs three numbers: the weighted integrability rho of the
reproducing kernel R, the weighted integral gamma of its local
oscillation over covering boxes, and the in-box weight spread C_w.  The
discretization condition is

    gamma * (rho + max(rho * C_w, rho + gamma)) < 1.

Essential suprema over the non-compact phase space are replaced by
maxima over probe grids on truncated domains, with the truncation
doubled until the estimate stabilizes.  The kernel's x-dependence is a
Fourier transform of a smooth spectral profile, so every x-slice comes
from one FFT; all integrals below are organized around that.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .covering import AlphaCovering, q_neighborhood
from .grids import Weight
from .symbol import NotAdmissibleError, SymbolTable, beta
from .transform import kernel_K
from .windows import Window

# re-export: kernel_K is the pointwise kernel evaluator shared with the
# transform layer
__all__ = [
    "TruncationConfig", "KernelEstimate", "DiscretizationVerdict",
    "kernel_K", "estimate_rho", "oscillation_kernel", "estimate_gamma",
    "discretization_condition", "lambda_fn", "theta_fn",
    "diagnostics_report",
]


@dataclass(frozen=True)
class TruncationConfig:
    """Truncated integration domain |x| <= x_max, |omega| <= omega_max,
    doubled until the estimate moves less than rel_change."""

    x_max: float = 8.0
    omega_max: float = 32.0
    rel_change: float = 0.05
    max_doublings: int = 3
    n_probes: int = 9
    probe_omega_max: float = 8.0
    z_density: int = 7
    seed: int = 42


@dataclass(frozen=True)
class KernelEstimate:
    kappa: int
    s: float
    value: float
    truncation: dict
    quad_error: float

    def __post_init__(self):
        if self.kappa not in (0, 1, 2):
            raise ValueError(f"kappa must be 0, 1 or 2, got {self.kappa}")
        if self.value < 0:
            raise ValueError("estimate must be nonnegative")


@dataclass(frozen=True)
class DiscretizationVerdict:
    rho: float
    gamma: float
    C_w: float
    lhs: float
    passed: bool


def discretization_condition(rho: float, gamma: float,
                             C_w: float) -> DiscretizationVerdict:
    """gamma * (rho + max(rho*C_w, rho + gamma)) < 1, evaluated exactly."""
    if rho < 0 or gamma < 0 or C_w < 0:
        raise ValueError("inputs must be nonnegative")
    lhs = float(gamma * (rho + max(rho * C_w, rho + gamma)))
    return DiscretizationVerdict(float(rho), float(gamma), float(C_w),
                                 lhs, bool(lhs < 1.0))


def lambda_fn(xi, omega, alpha: float):
    """(1+|w|) / ((1+|xi|)^{1/(1-a)} (1+|xi/beta(w)+w|)); bounded by
    2^{1/(1-a)}."""
    xi = np.asarray(xi, dtype=float)
    omega = np.asarray(omega, dtype=float)
    inv_beta = (1.0 + np.abs(omega)) ** alpha
    out = (1.0 + np.abs(omega)) / (
        (1.0 + np.abs(xi)) ** (1.0 / (1.0 - alpha))
        * (1.0 + np.abs(inv_beta * xi + omega))
    )
    return out if out.ndim else float(out)


def theta_fn(omega, omega_star, alpha: float):
    """beta(w* + w/beta(w*)) / beta(w*); bounded by (1+|w|)^{a/(1-a)}."""
    omega = np.asarray(omega, dtype=float)
    omega_star = np.asarray(omega_star, dtype=float)
    inv_beta = (1.0 + np.abs(omega_star)) ** alpha
    out = beta(omega_star + inv_beta * omega, alpha) / beta(omega_star, alpha)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# FFT kernel slices: R((x,w),(t,eta)) = P_{w,eta}(x - t) with
# P = F(G), G(xi) = m^{-kappa}(xi) sqrt(b_w b_eta)
#                   psi_hat(b_w (xi-w)) conj(psi_hat(b_eta (xi-eta))).


def _freq_radius(w: Window, tol: float = 1e-10) -> float:
    """Radius beyond which |psi_hat| is negligible."""
    if w.freq_support is not None:
        return max(abs(w.freq_support[0]), abs(w.freq_support[1]))
    xi = np.linspace(0.0, 200.0, 4001)
    mag = np.abs(w.fourier(xi))
    keep = np.nonzero(mag > tol * mag.max())[0]
    return float(xi[keep[-1]]) + 0.1


class _SliceEngine:
    """Shared FFT grid for kernel x-slices on a truncated domain."""

    def __init__(self, w: Window, alpha: float, tab: SymbolTable,
                 kappa: int, omega_max: float, u_max: float):
        self.w = w
        self.alpha = alpha
        self.tab = tab
        self.kappa = kappa
        rad = _freq_radius(w)
        b_min = float(beta(omega_max, alpha))
        xi_max = omega_max + rad / b_min + 1.0
        # dual spacing 1/(n*dxi) must resolve u in [-u_max, u_max] with
        # margin, i.e. n*dxi*... span 1/dxi >= 4*u_max
        dxi = min(0.05, 1.0 / (4.0 * u_max))
        n = 1 << int(math.ceil(math.log2(2.0 * xi_max / dxi)))
        self.n = n
        self.dxi = 2.0 * xi_max / n
        self.xi = -xi_max + self.dxi * np.arange(n)
        self.du = 1.0 / (n * self.dxi)
        self.u = (np.arange(n) - n // 2) * self.du
        self._m_pow = self.tab(self.xi) ** (-kappa) if kappa else None
        self._pre = np.exp(-2j * np.pi * self.u[0] * self.dxi
                           * np.arange(n))
        self._post = self.dxi * np.exp(-2j * np.pi * self.u * self.xi[0])

    def spectral_profiles(self, omegas: np.ndarray,
                          eta: float) -> np.ndarray:
        """G matrix, one row per omega."""
        b_eta = float(beta(eta, self.alpha))
        right = np.conj(self.w.fourier(b_eta * (self.xi - eta)))
        if self._m_pow is not None:
            right = right * self._m_pow
        b = beta(omegas, self.alpha)
        G = self.w.fourier((b[:, None] * (self.xi[None, :]
                                          - omegas[:, None])).ravel())
        G = G.reshape(omegas.size, self.n)
        return G * right[None, :] * np.sqrt(b_eta * b)[:, None]

    def slices(self, omegas: np.ndarray, eta: float) -> np.ndarray:
        """P[i, m] = R(((u_m + t), omegas[i]), (t, eta)) for any t."""
        G = self.spectral_profiles(omegas, eta)
        return self._post[None, :] * np.fft.fft(G * self._pre[None, :],
                                                axis=1)

    def u_index(self, u_values) -> np.ndarray:
        """Nearest grid index of u values (snapping error <= du/2)."""
        idx = np.rint((np.asarray(u_values) - self.u[0]) / self.du)
        return np.clip(idx, 0, self.n - 1).astype(int)


def _omega_grid(omega_max: float, spacing: float = 0.125) -> np.ndarray:
    n = int(math.ceil(2.0 * omega_max / spacing)) + 1
    return np.linspace(-omega_max, omega_max, n)


def _probe_omegas(trunc: TruncationConfig) -> np.ndarray:
    return np.linspace(-trunc.probe_omega_max, trunc.probe_omega_max,
                       trunc.n_probes)


def _rho_once(w: Window, alpha: float, s: float, tab: SymbolTable,
              x_max: float, omega_max: float,
              probes: np.ndarray) -> float:
    engine = _SliceEngine(w, alpha, tab, 1, omega_max, x_max)
    omegas = _omega_grid(omega_max)
    d_omega = omegas[1] - omegas[0]
    in_x = np.abs(engine.u) <= x_max
    weight = Weight(s)
    best = 0.0
    for eta in probes:
        P = engine.slices(omegas, float(eta))
        x_int = engine.du * np.abs(P[:, in_x]).sum(axis=1)
        val = d_omega * float(np.sum(weight.mutual(omegas, eta) * x_int))
        best = max(best, val)
    return best


def estimate_rho(w: Window, alpha: float, s: float, tab: SymbolTable,
                 trunc: TruncationConfig = TruncationConfig()
                 ) -> KernelEstimate:
    """rho ~ max over probe frequencies w* of
    int int |R(x, w; 0, w*)| w_s(w, w*) dx dw on the truncated domain.

    The probe time coordinate is irrelevant: R depends on time only
    through the difference x - x*.
    """
    if not tab.admissible:
        raise NotAdmissibleError("rho needs an admissible window")
    probes = _probe_omegas(trunc)
    x_max, omega_max = trunc.x_max, trunc.omega_max
    value = _rho_once(w, alpha, s, tab, x_max, omega_max, probes)
    history = [value]
    converged = False
    for _ in range(trunc.max_doublings):
        x_max *= 2.0
        omega_max *= 2.0
        new = _rho_once(w, alpha, s, tab, x_max, omega_max, probes)
        history.append(new)
        moved = abs(new - value) / max(new, 1e-300)
        value = new
        if moved < trunc.rel_change:
            converged = True
            break
    return KernelEstimate(
        kappa=1, s=s, value=value,
        truncation={"x_max": x_max, "omega_max": omega_max,
                    "history": history, "converged": converged},
        quad_error=abs(history[-1] - history[-2]) if len(history) > 1
        else 0.0,
    )


def _z_samples(cov: AlphaCovering, point, density: int):
    """Dense sample of Q_point: density x density points per box, plus
    the point itself."""
    boxes, _ = q_neighborhood(cov, point)
    zs = [tuple(map(float, point))]
    for b in boxes:
        zt = np.linspace(b.x_lo, b.x_hi, density + 2)[1:-1]
        zw = np.linspace(b.w_lo, b.w_hi, density + 2)[1:-1]
        for t in zt:
            for om in zw:
                zs.append((float(t), float(om)))
    return zs


def oscillation_kernel(w: Window, alpha: float, tab: SymbolTable,
                       cov: AlphaCovering, p1, p2,
                       z_density: int = 7) -> float:
    """osc(p1, p2) = sup over sampled z in Q_{p2} of
    |R(p1, p2) - Gamma(p2, z) R(p1, z)| with the explicit phase
    Gamma(p2, z) = exp(-2*pi*i*w2*(x2 - z_t))."""
    x2, w2 = float(p2[0]), float(p2[1])
    R_base = kernel_K(w, w, alpha, tab, 1, p1, (x2, w2))
    worst = 0.0
    for z in _z_samples(cov, (x2, w2), z_density):
        gamma_phase = np.exp(-2j * np.pi * w2 * (x2 - z[0]))
        R_z = kernel_K(w, w, alpha, tab, 1, p1, z)
        worst = max(worst, abs(R_base - gamma_phase * R_z))
    return worst


def _gamma2_once(w: Window, alpha: float, s: float, tab: SymbolTable,
                 cov: AlphaCovering, x_max: float, omega_max: float,
                 probes: np.ndarray, density: int) -> float:
    """sup over probe base points y of int |osc(x, y)| w_s dmu(x)."""
    engine = _SliceEngine(w, alpha, tab, 1, omega_max, x_max + 4.0)
    omegas = _omega_grid(omega_max)
    d_omega = omegas[1] - omegas[0]
    weight = Weight(s)
    n = engine.n
    in_x = np.abs(engine.u) <= x_max
    shift0 = n // 2  # u = 0 sits here
    best = 0.0
    for eta in probes:
        y = (0.0, float(eta))
        zs = _z_samples(cov, y, density)
        # group z by frequency so each row batch costs one FFT
        by_eta: dict[float, list[float]] = {}
        for zt, zw in zs:
            by_eta.setdefault(zw, []).append(zt)
        base = engine.slices(omegas, float(eta))  # R(x, y), y_t = 0
        osc = np.zeros((omegas.size, n))
        for zw, zts in by_eta.items():
            P = engine.slices(omegas, zw)
            for zt in zts:
                k = int(np.rint(zt / engine.du))
                zt_snap = k * engine.du
                phase = np.exp(-2j * np.pi * eta * (0.0 - zt_snap))
                # R(x, z) on the x grid = P shifted by k samples
                shifted = np.roll(P, k, axis=1)
                np.maximum(osc, np.abs(base - phase * shifted), out=osc)
        x_int = engine.du * osc[:, in_x].sum(axis=1)
        val = d_omega * float(np.sum(weight.mutual(omegas, eta) * x_int))
        best = max(best, val)
    return best


def _gamma1_once(w: Window, alpha: float, s: float, tab: SymbolTable,
                 cov: AlphaCovering, x_max: float, omega_max: float,
                 probes: np.ndarray, density: int) -> float:
    """sup over probe points x of int |osc(x, y)| w_s dmu(y)."""
    engine = _SliceEngine(w, alpha, tab, 1, omega_max, x_max + 4.0)
    omega_ys = _omega_grid(omega_max)
    d_omega = omega_ys[1] - omega_ys[0]
    weight = Weight(s)
    eps, c = cov.eps, cov.c
    u = engine.u
    in_y = np.abs(u) <= x_max
    yt = u[in_y]
    # rows of the covering reachable inside the frequency domain
    js = np.arange(cov.j_range[0], cov.j_range[1] + 1)
    row_w = np.array([cov.omega_nodes[j] for j in js])
    row_b = beta(row_w, alpha)
    row_half = 2.0 * eps * c / row_b
    # z frequency samples per row (density points inside the band)
    row_zw = [np.linspace(wj - h, wj + h, density + 2)[1:-1]
              for wj, h in zip(row_w, row_half)]
    best = 0.0
    offsets = (np.arange(density) + 1) / (density + 1) * 2.0  # in (0, 2)
    for om_x in probes:
        # R((0, om_x), (y_t, eta)) = P_{om_x,eta}(-y_t); the batch axis
        # of slices() is the analysis frequency, so build row by row
        P_y = np.empty((omega_ys.size, engine.n), dtype=complex)
        for i, eta in enumerate(omega_ys):
            P_y[i] = engine.slices(np.array([om_x]), float(eta))[0]
        P_z = {}
        for r, zws in enumerate(row_zw):
            for zw in zws:
                P_z[float(zw)] = engine.slices(np.array([om_x]),
                                               float(zw))[0]
        neg_idx = engine.u_index(-yt)
        total = 0.0
        for i, eta in enumerate(omega_ys):
            rows = np.nonzero(np.abs(eta - row_w) < row_half)[0]
            if rows.size == 0:
                continue
            R_y = P_y[i][neg_idx]
            osc = np.zeros(yt.size)
            for r in rows:
                bw = eps * row_b[r]  # half box x-width
                kf = np.floor(yt / bw)
                for dk in (0.0, 1.0):
                    k = kf + dk
                    inside = np.abs(yt / bw - k) < 1.0
                    for off in offsets:
                        zt = bw * (k - 1.0 + off)
                        zt_idx = engine.u_index(-zt)
                        zt_snap = -engine.u[zt_idx]
                        phase = np.exp(-2j * np.pi * eta * (yt - zt_snap))
                        for zw in row_zw[r]:
                            R_z = P_z[float(zw)][zt_idx]
                            diff = np.abs(R_y - phase * R_z)
                            np.maximum(osc, np.where(inside, diff, 0.0),
                                       out=osc)
            total_i = engine.du * osc.sum()
            total += d_omega * weight.mutual(om_x, eta) * total_i
        best = max(best, total)
    return best


def estimate_gamma(w: Window, alpha: float, s: float, tab: SymbolTable,
                   cov: AlphaCovering,
                   trunc: TruncationConfig = TruncationConfig()):
    """(gamma1, gamma2, gamma) over the truncated domain.

    gamma1 takes the sup over analysis points and integrates over the
    oscillation base point; gamma2 is the transpose direction.  Both use
    probe grids in frequency; the time coordinate of the probe is fixed
    at 0 (the kernel is covariant under joint time shifts and the box
    quantization only perturbs this periodically at sub-probe scale).
    """
    if not tab.admissible:
        raise NotAdmissibleError("gamma needs an admissible window")
    probes = _probe_omegas(trunc)
    g1 = _gamma1_once(w, alpha, s, tab, cov, trunc.x_max, trunc.omega_max,
                      probes, trunc.z_density)
    g2 = _gamma2_once(w, alpha, s, tab, cov, trunc.x_max, trunc.omega_max,
                      probes, trunc.z_density)
    return g1, g2, max(g1, g2)


def diagnostics_report(w: Window, window_spec: str, alpha: float, s: float,
                       tab: SymbolTable, eps_list, c: float = 1.0,
                       trunc: TruncationConfig = TruncationConfig()
                       ) -> dict:
    """Full sweep: rho once, (gamma, C_w, verdict) per epsilon."""
    from .covering import build_covering, mutual_weight_bound

    t0 = time.time()
    rho_est = estimate_rho(w, alpha, s, tab, trunc)
    entries = []
    for eps in eps_list:
        span = trunc.x_max + 4.0
        cov = build_covering(alpha, eps, c, (-span, span),
                             (-2.0 * trunc.omega_max, 2.0 * trunc.omega_max))
        g1, g2, g = estimate_gamma(w, alpha, s, tab, cov, trunc)
        C_w = mutual_weight_bound(cov, s)
        verdict = discretization_condition(rho_est.value, g, C_w)
        entries.append({
            "eps": eps, "gamma1": g1, "gamma2": g2, "gamma": g,
            "C_w": C_w, "lhs": verdict.lhs, "pass": verdict.passed,
        })
    return {
        "alpha": alpha, "window": window_spec, "s": s,
        "eps_list": list(eps_list), "rho": rho_est.value,
        "gamma1": [e["gamma1"] for e in entries],
        "gamma2": [e["gamma2"] for e in entries],
        "gamma": [e["gamma"] for e in entries],
        "C_w": [e["C_w"] for e in entries],
        "lhs": [e["lhs"] for e in entries],
        "pass": [e["pass"] for e in entries],
        "truncation": rho_est.truncation,
        "runtime": time.time() - t0,
    }
