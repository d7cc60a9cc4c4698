import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import fourier_dirichlet_temp, ungrouped_delta_temp
from slabgreen.eigen_oracle import basis_for, eigen_uniform_temp
from slabgreen.errors import CapacityError, ConvergenceError, DomainError, ValidityError
from slabgreen.image_kernel import SlabConfig
from slabgreen.special_fn import erfcx
from slabgreen.temp_field import (
    N_TERMS_MAX,
    _backward_tables,
    _forward_tables,
    delta_temp,
    l_coeffs,
    temp,
    temp_dirichlet,
    temp_large_lambda,
    temp_quadrature,
    temp_thick,
    temperature_field,
)

BIOTS = [0.1, 1.0, 10.0, 100.0]


# ---- integer coefficient tables


def _closed_l(m, n):
    return sum((-2) ** j * math.comb(2 * n, j) for j in range(1, m + 1)) // 2


def _closed_lt(m, n):
    return 1 + sum((-2) ** j * math.comb(2 * n + 1, j) for j in range(1, m + 1)) // 2


def test_coefficient_examples():
    assert l_coeffs(2).l_vals[1] == -4
    assert l_coeffs(2).l_vals[3] == -8
    assert l_coeffs(2).l_vals[2] == 8


@pytest.mark.parametrize("n", range(1, N_TERMS_MAX + 1))
def test_recurrences_agree_and_match_partial_sums(n):
    fwd, bwd = _forward_tables(n), _backward_tables(n)
    assert fwd == bwd
    c = l_coeffs(n)
    assert [c.l_vals[m] for m in range(1, 2 * n)] == [_closed_l(m, n) for m in range(1, 2 * n)]
    assert list(c.lt_vals) == [_closed_lt(m, n) for m in range(2 * n + 1)]
    assert c.l_vals[2 * n - 1] == -(2 ** (2 * n - 1))
    assert c.lt_vals[2 * n] == 2 ** (2 * n)


def test_coefficient_capacity():
    with pytest.raises(CapacityError):
        l_coeffs(N_TERMS_MAX + 1)
    with pytest.raises(DomainError):
        l_coeffs(-1)


# ---- fixed-temperature walls


def test_dirichlet_center_two_ways():
    cfg = SlabConfig.dirichlet()
    got = temp_dirichlet(0.5, cfg.tau, cfg)
    assert got == pytest.approx(fourier_dirichlet_temp(0.5, cfg.tau), abs=1e-13)
    assert got == pytest.approx(0.107977, abs=1e-5)


@given(st.floats(0.0, 1.0), st.floats(0.01, 3.0))
def test_dirichlet_matches_sine_series(z, tt):
    t = tt * 0.25
    assert temp_dirichlet(z, t, SlabConfig.dirichlet()) == pytest.approx(fourier_dirichlet_temp(z, t), abs=1e-12)


@given(st.floats(1e-6, 10.0))
def test_dirichlet_wall_value(t):
    cfg = SlabConfig.dirichlet()
    assert abs(temp_dirichlet(0.0, t, cfg)) <= 1e-12
    assert abs(temp_dirichlet(1.0, t, cfg)) <= 1e-12


# ---- Robin correction


def test_ungrouped_and_regrouped_forms_agree():
    cfg = SlabConfig.from_biot(1.0)
    for tt in (0.05, 0.2, 0.5, 1.0, 2.0):
        t = tt * cfg.tau
        for z in (0.0, 0.1, 0.25, 0.4, 0.5):
            assert abs(delta_temp(z, t, cfg) - ungrouped_delta_temp(z, t, cfg)) <= 1e-9


@given(st.floats(0.0, 1.0), st.floats(0.02, 3.0), st.sampled_from(BIOTS))
def test_correction_symmetric(z, tt, bi):
    cfg = SlabConfig.from_biot(bi)
    t = tt * cfg.tau
    assert abs(delta_temp(z, t, cfg) - delta_temp(1.0 - z, t, cfg)) <= 1e-10


def test_correction_vanishes_for_huge_lambda_tilde():
    cfg = SlabConfig(lam=2e4)
    t = cfg.tau  # lambda_tilde = 1e4
    for z in (0.0, 0.2, 0.5):
        assert abs(delta_temp(z, t, cfg)) <= 1e-3


def test_correction_at_bi_ten():
    cfg = SlabConfig.from_biot(10.0)
    t = cfg.tau
    want = eigen_uniform_temp(0.5, t, basis_for(cfg, t)) - temp_dirichlet(0.5, t, cfg)
    got = delta_temp(0.5, t, cfg)
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(0.055841, abs=1e-6)


def test_correction_ring_cap():
    cfg = SlabConfig.from_biot(1.0)
    with pytest.raises(ConvergenceError):
        delta_temp(0.5, 20.0 * cfg.tau, cfg, n_terms=2)


# ---- full temperature


@pytest.mark.parametrize("bi", BIOTS)
def test_three_independent_paths_agree(bi):
    cfg = SlabConfig.from_biot(bi)
    for tt in (0.05, 0.2, 1.0):
        t = tt * cfg.tau
        basis = basis_for(cfg, t)
        for z in (0.0, 0.25, 0.5):
            a = temp(z, t, cfg)
            assert a == pytest.approx(temp_quadrature(z, t, cfg), abs=1e-6)
            assert a == pytest.approx(eigen_uniform_temp(z, t, basis), abs=1e-6)


@pytest.mark.parametrize("bi", [math.inf, *BIOTS])
def test_bounds_and_monotone_cooling(bi):
    cfg = SlabConfig.from_biot(bi)
    for z in (0.0, 0.1, 0.3, 0.5):
        vals = [temp(z, j / 20 * cfg.tau, cfg) for j in range(1, 41)]
        assert all(0.0 <= v <= 1.0 + 1e-9 for v in vals)
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_cooling_slows_as_biot_drops():
    cfg = {bi: SlabConfig.from_biot(bi) for bi in (math.inf, *BIOTS)}
    t = 0.25
    for z in (0.0, 0.25, 0.5):
        vals = [temp(z, t, cfg[bi]) for bi in (math.inf, 100.0, 10.0, 1.0, 0.1)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_insulated_layer_stays_uniform():
    assert temp(0.3, 0.7, SlabConfig(lam=0.0)) == 1.0


def test_published_ratios():
    tau = 0.25
    c10, c1, c01 = (SlabConfig.from_biot(b) for b in (10.0, 1.0, 0.1))
    assert temp(0.5, tau, c10) / temp_dirichlet(0.5, tau, SlabConfig.dirichlet()) == pytest.approx(1.521, abs=0.01)
    assert temp(0.0, tau, c1) / temp(0.5, tau, c1) == pytest.approx(0.652, abs=0.005)
    assert temp(0.0, tau, c01) / temp(0.5, tau, c01) == pytest.approx(0.951, abs=0.005)
    assert temp(0.5, tau, c01) == pytest.approx(0.9207, abs=0.002)


def test_bi_one_edge_ratio_from_first_mode():
    cfg = SlabConfig.from_biot(1.0)
    a1 = basis_for(cfg, cfg.tau).alphas[0]
    # one-mode estimate cos(a1 L / 2) from a symmetric first eigenfunction
    assert temp(0.0, cfg.tau, cfg) / temp(0.5, cfg.tau, cfg) == pytest.approx(math.cos(a1 / 2), abs=2e-4)


def test_bi_hundred_surface():
    cfg = SlabConfig.from_biot(100.0)
    early = temp(0.0, 0.01 * cfg.tau, cfg)
    assert early == pytest.approx(erfcx(10.0), abs=1e-6)
    assert early == pytest.approx(0.056, abs=0.003)
    assert temp(0.0, 0.1 * cfg.tau, cfg) == pytest.approx(0.017831, abs=1e-6)
    for j in range(11):
        assert 0.015 <= temp(0.0, (0.01 + 0.009 * j) * cfg.tau, cfg) <= 0.060


# ---- approximate forms


def test_large_lambda_form():
    cfg = SlabConfig.from_biot(100.0)
    for tt in (0.01, 0.1, 1.0):
        t = tt * cfg.tau
        for z in (0.0, 0.2, 0.5):
            assert temp_large_lambda(z, t, cfg) == pytest.approx(temp(z, t, cfg), abs=3e-4)
    c10 = SlabConfig.from_biot(10.0)
    assert temp_large_lambda(0.5, c10.tau, c10) == pytest.approx(temp(0.5, c10.tau, c10), abs=6e-3)
    with pytest.raises(ValidityError):
        temp_large_lambda(0.5, 0.01 * c10.tau, c10)


def test_large_lambda_form_improves_with_lambda():
    errs = []
    for bi in (10.0, 100.0, 1000.0):
        cfg = SlabConfig.from_biot(bi)
        errs.append(abs(temp_large_lambda(0.1, cfg.tau, cfg) - temp(0.1, cfg.tau, cfg)))
    assert errs[0] > errs[1] > errs[2]


def test_thick_layer_form():
    cfg = SlabConfig.from_biot(100.0)
    t = 0.01 * cfg.tau
    assert temp_thick(0.0, t, cfg) == pytest.approx(1.0 / (10.0 * math.sqrt(math.pi)), rel=1e-12)
    for z in (0.0, 0.05, 0.2, 0.5):
        assert temp_thick(z, t, cfg) == pytest.approx(temp(z, t, cfg), abs=5e-4)
    d = SlabConfig.dirichlet()
    assert temp_thick(0.3, 0.01 * d.tau, d) == pytest.approx(temp(0.3, 0.01 * d.tau, d), abs=1e-12)
    with pytest.raises(ValidityError):
        temp_thick(0.5, cfg.tau, cfg)
    with pytest.raises(ValidityError):
        temp_thick(0.5, 0.01 * cfg.tau, SlabConfig.from_biot(1.0))


# ---- grid helper


def test_temperature_field_layout():
    cfg = SlabConfig.from_biot(1.0)
    field = temperature_field(cfg, [0.0, 0.5], [0.1, 0.2, 0.3])
    rows = list(field.rows())
    assert len(rows) == 6
    assert rows[4] == (0.5, 0.2, temp(0.5, 0.2, cfg))


def test_temperature_domain_errors():
    cfg = SlabConfig.from_biot(1.0)
    with pytest.raises(DomainError):
        temp(1.2, 0.1, cfg)
    with pytest.raises(DomainError):
        temp(0.5, 0.0, cfg)
