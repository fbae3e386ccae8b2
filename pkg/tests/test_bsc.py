import math

import numpy as np
import pytest

from localsecrecy.bsc import (
    BscWiretapInstance,
    Regime,
    analytic_solution,
    analyze,
    approx_secrecy_capacity,
    binary_entropy,
    exact_secrecy_capacity_bsc,
    leakage_branch,
    rate_branch,
    regime_classify,
)
from localsecrecy.channel import bsc, dtm, gram
from localsecrecy.errors import DegradednessError
from localsecrecy.optimizer import kkt_check

# 30-digit references
HB_011 = 0.346515336918666152086313284596
CS_01_045 = 0.363055840322140232438883866808
CS_01_03 = 0.285781328663445223519120934973


def inst(p, q, r=1.0, theta=0.085, eps=1e-3):
    return BscWiretapInstance(p, q, r, theta, eps)


class TestEntropy:
    @pytest.mark.parametrize("x, h", [(0.0, 0.0), (1.0, 0.0), (0.5, math.log(2)), (0.11, HB_011)])
    def test_values(self, x, h):
        assert binary_entropy(x) == pytest.approx(h, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            binary_entropy(1.5)

    @pytest.mark.parametrize(
        "p, q, cs", [(0.2, 0.2, 0.0), (0.0, 0.5, math.log(2)), (0.1, 0.45, CS_01_045), (0.1, 0.3, CS_01_03)]
    )
    def test_exact_capacity(self, p, q, cs):
        assert exact_secrecy_capacity_bsc(p, q) == pytest.approx(cs, abs=1e-15)

    def test_not_degraded(self):
        with pytest.raises(DegradednessError):
            exact_secrecy_capacity_bsc(0.3, 0.1)


class TestInstance:
    def test_spectrum_matches_gram(self):
        for p in (0.05, 0.1, 0.3, 0.45):
            i = inst(p, 0.45)
            w, v = gram(dtm(bsc(p), i.p_x)).eigh
            assert w[0] == pytest.approx(i.lambda_v, abs=1e-12)
            assert abs(abs(v[:, 0] @ i.tau) - 1.0) <= 1e-12
        assert inst(0.1, 0.3).lambda_lam == pytest.approx(0.16, abs=1e-12)

    def test_tau_orthogonal(self):
        i = inst(0.1, 0.3)
        assert abs(i.tau @ i.p_x.sqrt) <= 1e-16
        assert i.delta == pytest.approx(0.085)

    @pytest.mark.parametrize("kw", [dict(p=0.6), dict(q=-0.1), dict(r=0.0), dict(theta=0.0), dict(eps=1.0)])
    def test_rejects(self, kw):
        args = dict(p=0.1, q=0.3, r=1.0, theta=0.1, eps=1e-3)
        args.update(kw)
        with pytest.raises(ValueError):
            inst(**args)


class TestCapacity:
    def test_leakage_branch_value(self):
        # (2/eps^2) * (0.085/0.16) * 0.64
        assert approx_secrecy_capacity(inst(0.1, 0.3)) == pytest.approx(680000.0, rel=1e-14)

    def test_useless_eavesdropper(self):
        assert approx_secrecy_capacity(inst(0.1, 0.5)) == pytest.approx(2e6 * 0.64, rel=1e-14)

    def test_branches_meet(self):
        i = BscWiretapInstance(0.1, 0.3, 1.0, (1 - 2 * 0.3) ** 2, 1e-3)
        assert rate_branch(i) == leakage_branch(i)
        assert regime_classify(i) is Regime.BOTH_BINDING

    def test_degradedness_message(self):
        with pytest.raises(DegradednessError, match="degradedness assumption violated"):
            approx_secrecy_capacity(inst(0.3, 0.1))

    @pytest.mark.parametrize(
        "q, regime", [(0.3, Regime.LEAKAGE_ONLY), (0.4, Regime.RATE_ONLY)]
    )
    def test_regimes(self, q, regime):
        assert regime_classify(inst(0.1, q)) is regime

    def test_monotone_in_p(self):
        ps = np.linspace(0.01, 0.29, 57)
        approx = [approx_secrecy_capacity(inst(p, 0.3)) for p in ps]
        exact = [exact_secrecy_capacity_bsc(p, 0.3) for p in ps]
        assert np.all(np.diff(approx) <= 0)
        assert np.all(np.diff(exact) <= 0)


class TestAnalytic:
    @pytest.mark.parametrize(
        "p, q, theta",
        [(0.1, 0.3, 0.085), (0.1, 0.4, 0.085), (0.1, 0.3, (1 - 2 * 0.3) ** 2), (0.2, 0.25, 0.1)],
    )
    def test_analytic_solution_passes_kkt(self, p, q, theta):
        i = BscWiretapInstance(p, q, 1.0, theta, 1e-3)
        sol = analytic_solution(i)
        rep = kkt_check(i.problem(), sol)
        assert rep.passed, rep.lines()
        assert sol.objective == pytest.approx(approx_secrecy_capacity(i), rel=1e-12)

    def test_rate_only_caveat(self):
        rep = analyze(inst(0.1, 0.45))
        assert rep.regime is Regime.RATE_ONLY
        assert (rep.nu, rep.rho) == (0.0, pytest.approx(0.64))
        assert rep.caveats

    def test_leakage_only_multipliers(self):
        rep = analyze(inst(0.1, 0.3))
        assert rep.nu == pytest.approx(4.0) and rep.rho == 0.0
