import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncrsim.beamforming import ao_optimize
from ncrsim.ris import (HwiLinkStats, hwi_coefficients, hwi_rate, reflection_matrix,
                        ris_rate, wrap_phases)


def stats(**kw):
    base = dict(mu_br=1.0, mu_ru=1.0, mu_bu=0.0, phi_bu=math.pi / 4, alpha=1.0,
                kappa_t=0.0, kappa_r=0.0, m=1)
    base.update(kw)
    return HwiLinkStats(**base)


def test_reflection_matrix():
    np.testing.assert_array_equal(reflection_matrix(np.zeros(3)), np.eye(3))
    np.testing.assert_allclose(reflection_matrix([math.pi]), [[-1]], atol=1e-15)
    R = reflection_matrix([0.3, 2.0, 5.9])
    np.testing.assert_allclose(np.abs(np.diag(R)), 1.0)
    assert np.count_nonzero(R - np.diag(np.diag(R))) == 0


def test_wrap_phases():
    t = wrap_phases([-0.1, 2 * math.pi, 7.0, -1e-17])
    assert np.all((t >= 0) & (t < 2 * math.pi))
    assert t[1] == 0.0


def test_ris_rate_unit_case():
    assert ris_rate(np.ones((1, 1)), np.ones(1), [0.0], [1.0], 1.0, 1.0, 1e9) == pytest.approx(1e9)


def test_ris_rate_coherent():
    m = 9
    res = ao_optimize(np.ones((m, 1)), np.ones(m), 2.0, 0.5, 1.0)
    assert ris_rate(np.ones((m, 1)), np.ones(m), res.phases, [1.0], 2.0, 0.5, 1.0) == pytest.approx(
        math.log2(1 + 2.0 * m * m / 0.5))


def test_ris_rate_precoder_phase_invariance():
    rng = np.random.default_rng(0)
    h_br = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
    h_ru = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    th = rng.uniform(0, 2 * np.pi, 8)
    w = np.array([1, 1j, -1]) / math.sqrt(3)
    a = ris_rate(h_br, h_ru, th, w, 1, 1, 1)
    assert ris_rate(h_br, h_ru, th, w * np.exp(0.77j), 1, 1, 1) == pytest.approx(a, rel=1e-12)


def test_ris_rate_dimension_mismatch():
    with pytest.raises(ValueError):
        ris_rate(np.ones((3, 2)), np.ones(3), np.zeros(2), np.ones(2), 1, 1, 1)
    with pytest.raises(ValueError):
        ris_rate(np.ones((3, 2)), np.ones(3), np.zeros(3), np.ones(3), 1, 1, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 30))
def test_ris_rate_triangle_bound(seed, nb, m):
    rng = np.random.default_rng(seed)
    h_br = rng.standard_normal((m, nb)) + 1j * rng.standard_normal((m, nb))
    h_ru = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    res = ao_optimize(h_br, h_ru, 1.0, 0.1, 1.0)
    bound = math.log2(1 + (np.sum(np.abs(h_ru) * np.linalg.norm(h_br, axis=1))) ** 2 / 0.1)
    assert res.rate <= bound * (1 + 1e-12)


def test_hwi_coefficients_examples():
    beta, xi = hwi_coefficients(stats())
    assert beta == pytest.approx(4 / math.pi ** 2, rel=1e-14)
    assert xi == pytest.approx(1 - 4 / math.pi ** 2, rel=1e-14)
    beta, xi = hwi_coefficients(stats(alpha=0.5))
    assert beta == pytest.approx(1 / math.pi ** 2, rel=1e-14)
    assert xi == pytest.approx(0.25 * (1 - 4 / math.pi ** 2), rel=1e-14)
    assert hwi_coefficients(stats(phi_bu=math.pi / 2, mu_bu=3.0))[1] == pytest.approx(1 - 4 / math.pi ** 2)


def test_hwi_rate_unit_case():
    assert hwi_rate(stats(), 1.0, 1.0, 1e9) == pytest.approx(1e9, rel=1e-14)


def test_hwi_rate_ceiling():
    s = stats(kappa_t=0.05 ** 2, kappa_r=0.05 ** 2, m=100, mu_br=1e-7, mu_ru=1e-8)
    assert hwi_rate(s, 1e30, 1e-8, 1e9) == pytest.approx(1e9 * math.log2(201), rel=1e-9)


@given(st.floats(1e-9, 1.0), st.floats(1e-9, 1.0), st.floats(0, 1.0), st.floats(-10, 10),
       st.floats(1e-3, 1.0), st.integers(1, 2000))
def test_hwi_received_power_never_negative(mbr, mru, mbu, phi, alpha, m):
    # (2aMu/pi - v)^2 + (1 - 4/pi^2) a^2 M u^2 >= 0, so the guard never trips for valid inputs
    s = stats(mu_br=mbr, mu_ru=mru, mu_bu=mbu, phi_bu=phi, alpha=alpha, m=m)
    beta, xi = hwi_coefficients(s)
    assert beta * m * m + xi * m + mbu >= -1e-12 * (beta * m * m + mbu + 1e-300)
    assert hwi_rate(s, 1.0, 1.0, 1.0) >= 0


unit = st.floats(1e-6, 1.0)


@given(unit, unit, st.floats(0, 1e-3), st.floats(0, 0.1), st.floats(0, 0.1), st.floats(1e-6, 1e-3),
       st.integers(1, 500))
def test_hwi_monotonicity(mbr, mru, mbu, kt, kr, dk, m):
    s = stats(mu_br=mbr, mu_ru=mru, mu_bu=mbu, kappa_t=kt, kappa_r=kr, m=m)
    r = hwi_rate(s, 1.0, 0.01, 1.0)
    assert hwi_rate(s._replace(kappa_t=kt + dk), 1.0, 0.01, 1.0) <= r
    assert hwi_rate(s._replace(kappa_r=kr + dk), 1.0, 0.01, 1.0) <= r
    if hwi_coefficients(s)[1] >= 0:
        assert hwi_rate(s._replace(m=m + 1), 1.0, 0.01, 1.0) >= r
