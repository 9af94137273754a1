import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qudyn import disorder
from qudyn.hamiltonians import OMEGA3

GAUSS = disorder.gaussian(1.0)
UNIF = disorder.uniform(math.sqrt(3))


def test_moments_examples():
    assert GAUSS.moment(2) == pytest.approx(1)
    assert UNIF.moment(2) == pytest.approx(1)
    for d in (GAUSS, UNIF):
        assert d.moment(3) == 0 and d.moment(1) == 0 and d.moment(0) == 1
    assert GAUSS.moment(4) == pytest.approx(3)
    assert UNIF.moment(4) == pytest.approx(9 / 5)
    assert disorder.gaussian(2.0).moment(6) == pytest.approx(2**6 * 15)


def test_moment_overflow_reported():
    with pytest.raises(OverflowError):
        disorder.gaussian(10.0).moment(400)
    with pytest.raises(disorder.DisorderError):
        GAUSS.moment(-2)


def test_variances():
    assert disorder.gaussian(1.7).variance == pytest.approx(1.7**2)
    assert disorder.uniform(2.0).variance == pytest.approx(4 / 3)


def test_invalid_scale():
    with pytest.raises(disorder.DisorderError):
        disorder.gaussian(0)
    with pytest.raises(disorder.DisorderError):
        disorder.uniform(-1)


def test_characteristic_fn_examples():
    for d in (GAUSS, UNIF):
        assert d.characteristic_fn(0) == 1
    assert GAUSS.characteristic_fn(2) == pytest.approx(math.exp(-2), rel=1e-14)
    assert abs(disorder.uniform(1.0).characteristic_fn(math.pi)) <= 1e-15


@pytest.mark.parametrize("d", [GAUSS, UNIF, disorder.gaussian(0.6), disorder.uniform(2.5)], ids=str)
def test_characteristic_fn_matches_numeric_integral(d):
    # composite Simpson on a fine grid over the support
    lim = 12 * d.scale if d.kind == "gaussian" else d.scale
    h = np.linspace(-lim, lim, 20001)
    pdf = d.pdf(h)
    for tp in np.linspace(0, 10, 41):
        ref = np.trapezoid(pdf * np.exp(-1j * h * tp), h) if hasattr(np, "trapezoid") else np.trapz(pdf * np.exp(-1j * h * tp), h)
        assert abs(d.characteristic_fn(tp) - ref) <= 1e-6
        nodes, w = d.quadrature(64)
        assert abs(d.characteristic_fn(tp) - np.sum(w * np.exp(-1j * nodes * tp))) <= 1e-8


def test_small_argument_series_is_smooth():
    for x in (1e-9, 1e-6, 9.9e-5, 1.01e-4):
        assert UNIF.characteristic_fn(x / UNIF.scale) == pytest.approx(math.sin(x) / x, rel=1e-15)


def test_G_examples():
    for d in (GAUSS, UNIF):
        assert d.G(0) == 1 and d.G_prime(0) == 1
    assert GAUSS.G(1) == pytest.approx(math.exp(-2), rel=1e-14)
    assert abs(UNIF.G(math.pi / (2 * math.sqrt(3)))) <= 1e-15
    assert GAUSS.G(0.7) == pytest.approx(GAUSS.characteristic_fn(1.4))
    assert UNIF.G_prime(0.7) == pytest.approx(UNIF.characteristic_fn(0.7))


@given(st.floats(0, 50))
def test_G_bounded(t):
    for d in (GAUSS, UNIF):
        assert abs(d.G(t)) <= 1 and abs(d.G_prime(t)) <= 1


def test_G123_examples():
    np.testing.assert_allclose(GAUSS.G123(0), (3, 0, 0), atol=1e-15)
    g1, g2, g3 = GAUSS.G123(1.0)
    ref = math.exp(1.5) + 2 * (np.exp(1.5 * OMEGA3)).real
    assert g1 == pytest.approx(ref, rel=1e-14)
    assert abs(np.imag(g1)) <= 1e-12
    g1, _, _ = GAUSS.G123(4.0)
    assert g1 / math.exp(1.5 * 16) == pytest.approx(1, abs=1e-12)
    with pytest.raises(disorder.DisorderError):
        UNIF.G123(1.0)


@given(st.floats(0, 4))
def test_G123_are_real(t):
    # the omega and omega^2 entries of v(t) are complex conjugates, so every G_k is real
    for g in GAUSS.G123(t):
        assert abs(np.imag(g)) <= 1e-12 * max(1, abs(g))


def test_G123_matches_ratio_of_moments():
    # G_{k+1} = 3 * sum of x^n / n! over n = k (mod 3), with x = 3 sigma^2 t^2 / 2
    t = 0.8
    x = 1.5 * t**2
    terms = [x**n / math.factorial(n) for n in range(80)]
    for k, g in enumerate(GAUSS.G123(t)):
        ref = 3 * sum(terms[n] for n in range(80) if n % 3 == k)
        assert np.real(g) == pytest.approx(ref, rel=1e-13)


def test_decay_rate_examples():
    assert GAUSS.decay_rate_gamma(0.5) == pytest.approx(1.0, rel=1e-14)
    for d in (GAUSS, UNIF):
        assert d.decay_rate_gamma(0) == 0
        assert abs(d.decay_rate_gamma(1e-7)) < 1e-6
    t0 = math.pi / (2 * math.sqrt(3))
    assert UNIF.decay_rate_gamma(t0 + 0.05) < 0
    assert UNIF.gamma_pole(t0)
    assert math.isnan(UNIF.decay_rate_gamma(t0))


def test_decay_rate_matches_derivative_of_G():
    for d in (GAUSS, UNIF):
        for t in (0.01, 0.3, 0.8, 1.3, 2.2):
            if d.gamma_pole(t):
                continue
            h = 1e-6
            dG = (d.G(t + h) - d.G(t - h)) / (2 * h)
            assert d.decay_rate_gamma(t) == pytest.approx(-dG / (2 * d.G(t)), rel=1e-6, abs=1e-8)


def test_decay_rate_sign_pattern():
    ts = np.linspace(0, 5, 2001)
    assert all(GAUSS.decay_rate_gamma(t) >= 0 for t in ts)
    b = UNIF.scale
    period = math.pi / (2 * b)
    # the first window is pure decay; every later window has both signs
    for k in range(1, int(5 / period)):
        window = ts[(ts > k * period) & (ts < (k + 1) * period)]
        vals = np.array([UNIF.decay_rate_gamma(t) for t in window if not UNIF.gamma_pole(t)])
        assert vals.max() > 0 and vals.min() < 0


def test_sample_moments(rng):
    n = 1_000_000
    for d in (GAUSS, UNIF):
        h = d.sample(rng, n)
        for k in (2, 4):
            x = h**k
            se = x.std(ddof=1) / math.sqrt(n)
            assert abs(x.mean() - d.moment(k)) <= 5 * se


def test_sampler_is_seed_deterministic():
    a = GAUSS.sample(np.random.default_rng(7), 10)
    b = GAUSS.sample(np.random.default_rng(7), 10)
    np.testing.assert_array_equal(a, b)


def test_uniform_pdf_support():
    np.testing.assert_allclose(UNIF.pdf(np.array([-2.0, 0.0, 1.0, 2.0])), [0, 1 / (2 * UNIF.scale), 1 / (2 * UNIF.scale), 0])


def test_json_round_trip():
    for d in (GAUSS, UNIF, disorder.gaussian(0.3)):
        assert disorder.Distribution.from_json(d.to_json()) == d
    assert disorder.Distribution.from_json({"kind": "uniform", "b": 1.7320508}).scale == 1.7320508
    with pytest.raises(disorder.DisorderError):
        disorder.Distribution.from_json({"kind": "cauchy"})
