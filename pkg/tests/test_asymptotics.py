import math

import numpy as np
import pytest

from growth1324.asymptotics import (
    LogQSums,
    MaximizeOptions,
    closed_form_means,
    delta_star,
    g0,
    gN_eval,
    log_E,
    maximize_gN,
    mu_beta,
    mu_gamma,
    mu_gamma_gt,
    mu_pair,
    mu_rho,
    mu_rho_plus,
    mu_sizes,
)
from growth1324.errors import CoverageError, DomainError


def test_baseline_point():
    lam = 0.61840
    assert abs(delta_star(lam) - 0.86238) < 1e-4
    assert abs(g0(lam, delta_star(lam)) - 9.40399) < 5e-5


def test_log_E_domain():
    with pytest.raises(DomainError):
        log_E(0, 0.5)
    with pytest.raises(DomainError):
        log_E(1, 1.5)
    assert math.isfinite(log_E(1, 0)) and math.isfinite(log_E(1, 1))


@pytest.mark.parametrize("lam", np.linspace(0.3, 1.2, 7))
def test_delta_star_is_stationary(lam):
    d = delta_star(lam)
    h = 1e-6
    assert log_E(lam, d) >= max(log_E(lam, d - h), log_E(lam, d + h))


def test_means():
    assert mu_beta(1, 0.5) == pytest.approx(1 / 1.5)
    assert mu_rho(1) == 1 / 8 and mu_rho_plus(1, 1) == 1 / 2
    assert mu_gamma(0, 1, 0.5) + mu_gamma_gt(0, 1, 0.5) == pytest.approx(1)
    assert closed_form_means("rho", m=2) == mu_rho(2)
    with pytest.raises(DomainError):
        mu_rho_plus(2, 3)
    with pytest.raises(DomainError):
        closed_form_means("nope")
    assert mu_pair("(())", "()()", 0.7, 0.8) == mu_sizes(2, 2, 2, 0.7, 0.8)


def test_small_N_reduces_to_g0():
    for n in (0, 1, 2):
        assert gN_eval(0.7, 0.8, n) == pytest.approx(g0(0.7, 0.8), rel=1e-15)
    with pytest.raises(CoverageError):
        gN_eval(0.7, 0.8, 3)


def test_maximize_baseline():
    res = maximize_gN(None, 0)
    assert res.converged
    assert abs(res.g - 9.40399) < 5e-5
    assert abs(res.delta - delta_star(res.lam)) < 1e-6
    assert res.candidates and res.candidates[0]["g"] <= res.g


def test_maximize_respects_coverage(q8_table):
    with pytest.raises(CoverageError):
        maximize_gN(q8_table, 9)


def test_bound_increases_with_N(q8_table):
    gs = [maximize_gN(q8_table, n, MaximizeOptions(starts=2)).g for n in (3, 5, 8)]
    assert gs == sorted(gs) and gs[0] > 9.404


def test_sums_skip_trivial(q8_table):
    s = LogQSums.from_table(q8_table, 8)
    assert s.pairs == 804
    assert all(k[0] >= 2 and k[1] >= 1 for k in s.sums)
