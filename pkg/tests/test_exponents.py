import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybriddp.cost import entropy
from hybriddp.exponents import (
    RESIDUAL_TOL,
    bandwidth_exponent,
    emit_curve,
    gamma_mu_residuals,
    hypercube_residuals,
    parse_grid,
    setcover_exponent_at,
    solve_gamma,
    solve_gamma_mu,
    solve_mu0,
    solve_setcover_balance,
    solve_setcover_exponent,
    solve_tsp_alpha,
    tsp_sides,
    warmup_hamiltonian_exponent,
    warmup_terms,
    write_curve_csv,
)


def test_gamma_k6_value_and_levels():
    sol = solve_gamma(6)
    assert sol.gamma == pytest.approx(1.816905, abs=1e-4)
    assert sol.c == pytest.approx(0.861483, abs=1e-4)
    expected = (0.28448, 0.28453, 0.28470, 0.28628, 0.29604, 0.34174)
    for got, want in zip(sol.alpha, expected):
        assert got == pytest.approx(want, abs=5e-4)


@pytest.mark.parametrize("k", range(2, 9))
def test_gamma_residuals_and_level_order(k):
    sol = solve_gamma(k)
    assert sol.max_residual < RESIDUAL_TOL
    assert np.max(np.abs(hypercube_residuals(sol.c, sol.alpha))) < RESIDUAL_TOL
    assert all(a < b for a, b in zip(sol.alpha, sol.alpha[1:]))
    assert 0 < sol.alpha[0] and sol.alpha[-1] < 0.5


def test_gamma_nonincreasing_in_k():
    gammas = [solve_gamma(k).gamma for k in range(2, 9)]
    assert all(b <= a + 1e-12 for a, b in zip(gammas, gammas[1:]))


def test_gamma_k7_barely_moves():
    g6, g7 = solve_gamma(6).gamma, solve_gamma(7).gamma
    assert g7 <= g6 and g6 - g7 < 1e-3


def test_gamma_needs_two_levels():
    with pytest.raises(ValueError):
        solve_gamma(1)


@pytest.mark.parametrize("mu,want", [(1.70, 1.7223), (1.75, 1.7399), (1.8, 1.7568), (1.9, 1.7883), (2.0, 1.8169)])
def test_gamma_mu_points(mu, want):
    assert solve_gamma_mu(mu).gamma_mu == pytest.approx(want, abs=1e-3)


def test_gamma_mu_at_two_is_unrestricted():
    assert solve_gamma_mu(2.0).gamma_mu == pytest.approx(solve_gamma(6).gamma, abs=1e-6)


def test_gamma_mu_residuals_small():
    assert max(abs(r) for r in gamma_mu_residuals(1.8)) < RESIDUAL_TOL


def test_gamma_mu_rejects_mu_outside_range():
    with pytest.raises(ValueError):
        solve_gamma_mu(2.5)


def test_gamma_mu_monotone_and_below_gamma2():
    g2 = solve_gamma(6).gamma
    values = [p.gamma_mu for p in emit_curve(parse_grid("1.60:2.00:0.02"))]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(v <= g2 + 1e-12 for v in values)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1.0, max_value=2.0 / 1.7346))
def test_sqrt_q_scaling(q):
    mu0 = solve_mu0()
    qmu = min(q * mu0, 2.0)
    assert solve_gamma_mu(qmu).gamma_mu <= math.sqrt(qmu / mu0) * mu0 + 1e-9


def test_mu0_root():
    mu0 = solve_mu0()
    assert mu0 == pytest.approx(1.734622, abs=1e-4)
    assert abs(solve_gamma_mu(mu0).gamma_mu - mu0) < 1e-6


def test_gamma_mu_ratio_bound_above_mu0():
    mu0 = solve_mu0()
    for mu in np.linspace(mu0, 2.0, 12):
        g = solve_gamma_mu(float(mu)).gamma_mu
        assert g * g / mu <= mu0 + 1e-6


def test_tsp_balance():
    alpha, exp = solve_tsp_alpha()
    assert alpha == pytest.approx(0.055362, abs=1e-5)
    assert exp == pytest.approx(0.788595, abs=1e-5)
    assert 2.0**exp == pytest.approx(1.727391, abs=1e-4)
    pre, quant = tsp_sides(alpha)
    assert pre == pytest.approx(quant, abs=1e-12)


def test_setcover_beta_zero_is_tsp():
    assert solve_setcover_exponent(0.0) == pytest.approx(0.788595, abs=1e-5)


def test_setcover_exponent_grows_with_beta():
    values = [solve_setcover_exponent(b) for b in np.linspace(0.0, 0.19, 20)]
    assert values[1] >= values[0]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_setcover_balance_is_minimax():
    beta = 0.05
    alpha, exp = solve_setcover_balance(beta)
    for a in (alpha * 0.5, alpha * 1.5, min(0.5, alpha * 3)):
        assert setcover_exponent_at(a, beta) >= exp - 1e-12


def test_setcover_beta_range():
    with pytest.raises(ValueError):
        solve_setcover_balance(0.2)


def test_bandwidth_exponent():
    value = bandwidth_exponent()
    assert value == pytest.approx(2.9454, abs=5e-4)
    assert value**2 / 5 == pytest.approx(solve_mu0(), abs=1e-12)
    assert bandwidth_exponent(2.0) == pytest.approx(math.sqrt(10), abs=1e-12)


def test_warmup():
    classical, quantum = warmup_terms()
    assert 2**classical == pytest.approx(2 ** entropy(0.25), abs=1e-12)
    assert 2**classical == pytest.approx(1.7548, abs=1e-4)
    assert quantum == pytest.approx(0.75)
    assert warmup_hamiltonian_exponent() == pytest.approx(1.7549, abs=1e-3)
    assert warmup_hamiltonian_exponent() == pytest.approx(2 ** max(classical, quantum))


def test_parse_grid():
    grid = parse_grid("1.70:2.00:0.01")
    assert len(grid) == 31
    assert grid[0] == 1.70 and grid[-1] == 2.00
    with pytest.raises(ValueError):
        parse_grid("1.7:2.0")
    with pytest.raises(ValueError):
        parse_grid("2:1:0.1")


def test_curve_csv(tmp_path):
    path = tmp_path / "curve.csv"
    write_curve_csv(emit_curve([1.8, 2.0]), path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["mu", "gamma_mu"]
    assert rows[1] == ["1.800000", f"{solve_gamma_mu(1.8).gamma_mu:.6f}"]
    assert len(rows) == 3
