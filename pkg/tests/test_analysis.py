import math

import numpy as np
import pytest
from scipy import integrate

from risbeam.analysis import (
    approx_ratio_continuous,
    approx_ratio_limited,
    approx_ratio_uniform,
    limited_pmf,
    loss_db_decomposition,
    mean_gain,
)
from risbeam.core import TWO_PI, CoefficientSet, PdaProfile, build_coefficient_set, build_phase_set, pda_gain, uniform_threshold

pi = np.pi

# published loss values in dB, rows beta_min, columns K
TABLE_K = (2, 3, 4, 6, 8)
TABLE = {
    0.2: (8.359, 7.252, 6.395, 5.906, 5.731),
    0.5: (6.421, 4.712, 3.918, 3.416, 3.242),
    0.8: (4.838, 2.749, 1.993, 1.485, 1.309),
}


def uniform_ws(K, bmin, alpha=1.6):
    return build_coefficient_set(build_phase_set(K, TWO_PI), PdaProfile(bmin, alpha))


def test_unit_gains_k2():
    ws = uniform_ws(2, 1.0)
    assert approx_ratio_uniform(ws).e_pda == pytest.approx(4 / pi**2, abs=1e-15)


@pytest.mark.parametrize("bmin", sorted(TABLE))
@pytest.mark.parametrize("col", range(5))
def test_loss_table(bmin, col):
    K = TABLE_K[col]
    assert approx_ratio_uniform(uniform_ws(K, bmin)).loss_db == pytest.approx(TABLE[bmin][col], abs=0.002)


@pytest.mark.parametrize("bmin", sorted(TABLE))
def test_loss_non_increasing_in_k(bmin):
    losses = [approx_ratio_uniform(uniform_ws(K, bmin)).loss_db for K in TABLE_K]
    assert all(a >= b for a, b in zip(losses, losses[1:]))


def test_decomposition_flat_gain():
    gain, quant = loss_db_decomposition(uniform_ws(4, 1.0))
    assert gain == pytest.approx(0.0, abs=1e-15)
    # sinc(1/4) = sin(pi/4) / (pi/4)
    assert quant == pytest.approx(-20 * math.log10(math.sin(pi / 4) / (pi / 4)), abs=1e-12)
    assert quant == pytest.approx(0.912, abs=5e-4)


@pytest.mark.parametrize("K", [2, 3, 4, 6, 8, 16])
@pytest.mark.parametrize("bmin", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_decomposition_sums_to_loss(K, bmin):
    ws = uniform_ws(K, max(bmin, 1e-3))
    gain, quant = loss_db_decomposition(ws)
    assert gain + quant == pytest.approx(approx_ratio_uniform(ws).loss_db, abs=1e-12)


def test_decomposition_large_k_tends_to_continuous():
    prof = PdaProfile(0.2, 1.6)
    ws = build_coefficient_set(build_phase_set(4096, TWO_PI), prof)
    gain, quant = loss_db_decomposition(ws)
    assert quant < 1e-5
    assert gain == pytest.approx(approx_ratio_continuous(prof).loss_db, abs=1e-5)


def test_uniform_rejects_limited_set():
    ws = build_coefficient_set(build_phase_set(4, pi), PdaProfile())
    with pytest.raises(ValueError):
        approx_ratio_uniform(ws)
    with pytest.raises(ValueError):
        loss_db_decomposition(ws)


# ------------------------------------------------------------------ limited regime


@pytest.mark.parametrize("R", [0.1, 1.0, pi])
def test_pmf_k2_uniform(R):
    np.testing.assert_allclose(limited_pmf(2, R), [0.5, 0.5])


def test_pmf_k3_threshold():
    np.testing.assert_allclose(limited_pmf(3, TWO_PI * 2 / 3), [1 / 3] * 3, atol=1e-15)


@pytest.mark.parametrize("K", [3, 4, 5, 8])
@pytest.mark.parametrize("frac", [0.01, 0.3, 0.7, 1.0])
def test_pmf_sums_to_one(K, frac):
    p = limited_pmf(K, frac * uniform_threshold(K))
    assert p.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(p >= 0)


def test_pmf_matches_empirical_apq_frequencies():
    from risbeam.quantize import nearest_phase

    K, R = 5, 2.5
    phases = build_phase_set(K, R).phases
    rng = np.random.default_rng(0)
    picks = nearest_phase(rng.uniform(-pi, pi, 200_000), phases)
    freq = np.bincount(picks, minlength=K) / picks.size
    np.testing.assert_allclose(freq, limited_pmf(K, R), atol=0.005)


def test_limited_rejects_uniform_regime():
    with pytest.raises(ValueError):
        limited_pmf(4, 5.0)
    ws = build_coefficient_set(build_phase_set(4, 2.0), PdaProfile())
    with pytest.raises(ValueError):
        approx_ratio_limited(ws, 5.0)


def test_limited_k2_half_circle():
    ws = CoefficientSet.from_arrays([-pi / 2, pi / 2], [1.0, 1.0])
    assert approx_ratio_limited(ws, pi).e_pda == pytest.approx(4 / pi**2, abs=1e-15)


def test_limited_zero_range_k2():
    ws = CoefficientSet.from_arrays([0.0, 1e-3], [1.0, 1.0])
    assert approx_ratio_limited(ws, 0.0).e_pda == 0.0


@pytest.mark.parametrize("K", [2, 3, 4, 8])
@pytest.mark.parametrize("bmin", [0.2, 0.5, 1.0])
def test_threshold_continuity(K, bmin):
    R = uniform_threshold(K)
    ws = uniform_ws(K, bmin)
    uni = approx_ratio_uniform(ws).e_pda
    assert approx_ratio_limited(ws, R).e_pda == pytest.approx(uni, abs=1e-12)
    # just below the threshold the limited formula stays close
    ws_below = build_coefficient_set(build_phase_set(K, R - 1e-9), PdaProfile(bmin, 1.6))
    assert approx_ratio_limited(ws_below, R - 1e-9).e_pda == pytest.approx(uni, abs=1e-8)


# ------------------------------------------------------------------ continuous limit


def _gamma_mean(bmin, a):
    # mean of ((1 + sin x)/2)^a over a period: Gamma(a + 1/2) / (sqrt(pi) Gamma(a + 1))
    return (1 - bmin) * math.exp(math.lgamma(a + 0.5) - math.lgamma(a + 1)) / math.sqrt(pi) + bmin


@pytest.mark.parametrize("bmin", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_continuous_linear_law(bmin):
    assert approx_ratio_continuous(PdaProfile(bmin, 1.0)).e_pda == pytest.approx(((1 + bmin) / 2) ** 2, abs=1e-12)


def test_continuous_flat():
    assert approx_ratio_continuous(PdaProfile(1.0, 1.6)).e_pda == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("bmin", [0.0, 0.2, 0.7])
@pytest.mark.parametrize("a", [0.5, 1.0, 1.6, 2.0, 3.7])
def test_continuous_gamma_closed_form(bmin, a):
    prof = PdaProfile(bmin, a, 0.3)
    assert mean_gain(prof) == pytest.approx(_gamma_mean(bmin, a), abs=1e-10)


def test_continuous_against_quadrature_oracles():
    prof = PdaProfile(0.2, 1.6)
    quad, _ = integrate.quad(lambda t: pda_gain(t, prof), 0.0, TWO_PI, limit=200, epsabs=1e-14)
    # independent trapezoid at 1e6 nodes on a grid that does not share the anchor
    x = np.linspace(0.0, TWO_PI, 1_000_001)
    trap = np.trapezoid(pda_gain(x, prof), x) / TWO_PI
    e = approx_ratio_continuous(prof).e_pda
    assert e == pytest.approx((quad / TWO_PI) ** 2, abs=1e-10)
    assert e == pytest.approx(trap**2, abs=1e-10)


def test_report_loss_db_positive():
    r = approx_ratio_uniform(uniform_ws(3, 0.5))
    assert 0 < r.e_pda <= 1
    assert r.loss_db == pytest.approx(-10 * math.log10(r.e_pda))
    assert r.loss_db > 0
