import math

import numpy as np
import pytest

from alphamod.quadrature import adaptive_quad
from alphamod.windows import (HypothesisVerdict, Purpose, bandlimited_window,
                              bspline_window, bump_window, check_hypotheses,
                              estimate_decay_rate, gaussian_window,
                              parse_window_spec, required_decay)


def numeric_ft(w, xi):
    """Reference transform by direct quadrature of the time samples."""
    lo, hi = w.support if w.support else (-30.0, 30.0)
    re, _ = adaptive_quad(
        lambda t: w.time(t) * np.cos(2 * np.pi * xi * t), lo, hi, tol=1e-12)
    im, _ = adaptive_quad(
        lambda t: -w.time(t) * np.sin(2 * np.pi * xi * t), lo, hi, tol=1e-12)
    return re + 1j * im


@pytest.mark.parametrize("make,label", [
    (lambda: gaussian_window(), "gaussian"),
    (lambda: bspline_window(2), "bspline2"),
    (lambda: bspline_window(4), "bspline4"),
    (lambda: bump_window(1.0), "bump"),
    (lambda: bandlimited_window(1.0), "bandlimited"),
])
def test_fourier_matches_reference(make, label):
    w = make()
    for xi in (0.0, 0.3, 1.1, 2.7):
        ref = numeric_ft(w, xi)
        assert w.fourier(xi) == pytest.approx(ref, abs=5e-7), (label, xi)


@pytest.mark.parametrize("make", [
    gaussian_window,
    lambda: bspline_window(3),
    lambda: bump_window(1.0),
    lambda: bandlimited_window(1.0),
])
def test_l2_norm_consistent(make):
    w = make()
    lo, hi = w.support if w.support else (-30.0, 30.0)
    mass, _ = adaptive_quad(lambda t: np.abs(w.time(t)) ** 2, lo, hi,
                            tol=1e-12)
    assert mass == pytest.approx(w.l2_norm**2, rel=1e-6)


def test_gaussian_unit_norm():
    assert gaussian_window().l2_norm == pytest.approx(1.0)


def test_fourier_derivatives_by_finite_differences():
    h = 1e-4
    for w in (gaussian_window(), bspline_window(4), bump_window(1.0)):
        for xi in (0.2, 1.3):
            fd1 = (w.fourier(xi + h) - w.fourier(xi - h)) / (2 * h)
            assert w.fourier(xi, 1) == pytest.approx(fd1, abs=1e-5)
            fd2 = (w.fourier(xi + h) - 2 * w.fourier(xi)
                   + w.fourier(xi - h)) / h**2
            assert w.fourier(xi, 2) == pytest.approx(fd2, abs=1e-4)


def test_bspline_compact_support():
    w = bspline_window(3)
    half = w.support[1]
    assert w.time(np.array([half + 1e-9, -half - 1e-9, half + 5.0])) \
        == pytest.approx(0.0)
    assert w.time(0.0) > 0


def test_bump_compact_support():
    w = bump_window(1.0)
    assert w.time(np.array([1.0, -1.0, 1.5])) == pytest.approx(0.0)
    assert w.time(0.0) > 0


def test_bandlimited_spectrum_compact():
    w = bandlimited_window(1.0)
    assert w.freq_support == (-1.0, 1.0)
    assert w.fourier(np.array([1.0001, -1.2, 3.0])) == pytest.approx(0.0)
    assert w.l2_norm**2 == pytest.approx(35.0 / 64.0)


def test_estimate_decay_rate_recovers_bspline_order():
    w = bspline_window(3)
    r, _ = estimate_decay_rate(w, 0, 200.0)
    assert r == pytest.approx(3.0, abs=0.2)


def test_required_decay_closed_forms():
    assert required_decay(Purpose.ADMISSIBILITY, 0.5) == 1.0
    assert required_decay(Purpose.KERNEL_INTEGRABILITY, 0.5) == 9.0
    assert required_decay(Purpose.DISCRETIZATION, 0.0) == 2.0


@pytest.mark.parametrize("s1,s2", [(0.0, 1.0), (1.0, 2.5)])
@pytest.mark.parametrize("a1,a2", [(0.1, 0.3), (0.3, 0.6)])
def test_required_decay_monotone(a1, a2, s1, s2):
    p = Purpose.KERNEL_INTEGRABILITY
    assert required_decay(p, a1, s1) <= required_decay(p, a2, s1)
    assert required_decay(p, a1, s1) <= required_decay(p, a1, s2)


def test_check_hypotheses_verdicts():
    good = check_hypotheses(gaussian_window(), 0.5, 0.0,
                            Purpose.DISCRETIZATION)
    assert good.passed
    bad = check_hypotheses(bspline_window(1), 0.9, 0.0,
                           Purpose.ADMISSIBILITY)
    assert not bad.passed
    assert bad.required_r == pytest.approx(
        max(1.0, 0.9 / (2 * 0.1)))


def test_parse_window_spec():
    assert parse_window_spec("gaussian").label == gaussian_window().label
    assert parse_window_spec("bspline:4").support == bspline_window(4).support
    with pytest.raises(ValueError):
        parse_window_spec("unknown:1")
    with pytest.raises(ValueError):
        parse_window_spec("gaussian:2")


def test_alpha_domain_validated():
    with pytest.raises(ValueError):
        required_decay(Purpose.ADMISSIBILITY, 1.0)
