import math

import numpy as np
import pytest

from helpers import random_channel
from localsecrecy.channel import Channel, bsc, dtm, gram, mutual_information
from localsecrecy.errors import EpsilonRangeError, InvalidFamilyError
from localsecrecy.local_approx import (
    Conditionals,
    approx_channel_info,
    approx_encoding_info,
    exact_encoding_info,
    exact_markov_info,
    info_triple,
)
from localsecrecy.prob_core import Distribution, PerturbationFamily, random_family

# H_b(0.11), 30-digit reference
HB_011 = 0.346515336918666152086313284596


def _binary_family(eps):
    return PerturbationFamily(
        Distribution([0.5, 0.5]), Distribution([0.5, 0.5]), np.array([[1.0, -1.0], [-1.0, 1.0]]), eps
    )


class TestEncoding:
    def test_zero_perturbation(self):
        f = PerturbationFamily(Distribution([0.5, 0.5]), Distribution([0.5, 0.5]), np.zeros((2, 2)), 0.3)
        assert approx_encoding_info(f) == 0.0
        assert exact_encoding_info(f) == 0.0

    def test_binary_exact_and_approx(self):
        # P_{X|U} = (0.5 +- eps): I(U;X) = log 2 - H_b(0.5 - eps)
        eps = 0.1
        f = _binary_family(eps)
        assert approx_encoding_info(f) == pytest.approx(2 * eps**2, rel=1e-14)
        hb = -(0.4 * math.log(0.4) + 0.6 * math.log(0.6))
        assert exact_encoding_info(f) == pytest.approx(math.log(2) - hb, rel=1e-13)

    def test_deterministic_split(self):
        c = Conditionals(Distribution([0.5, 0.5]), np.eye(2))
        assert exact_encoding_info(c) == pytest.approx(math.log(2), abs=1e-15)

    def test_bsc_cascade_frozen(self):
        # deterministic split through BSC(0.1), then through BSC(0.1) followed by BSC(1/80),
        # whose composite crossover is 0.11
        c = Conditionals(Distribution([0.5, 0.5]), np.eye(2))
        assert exact_markov_info(bsc(0.1), c) == pytest.approx(math.log(2) - 0.325082973391448, abs=1e-12)
        cascade = bsc(0.1).w @ bsc(1 / 80).w
        assert exact_markov_info(Channel(cascade), c) == pytest.approx(math.log(2) - HB_011, abs=1e-13)

    def test_epsilon_outside_region(self):
        with pytest.raises(EpsilonRangeError):
            approx_encoding_info(_binary_family(0.6))

    def test_broken_marginal(self):
        f = PerturbationFamily(
            Distribution([0.5, 0.5]), Distribution([0.7, 0.3]), np.array([[1.0, -1.0], [-1.0, 1.0]]), 0.1
        )
        with pytest.raises(InvalidFamilyError):
            approx_encoding_info(f)


class TestChannelInfo:
    def test_identity_reduces_to_encoding(self, rng):
        f = random_family(rng, 3, 2, 0.05)
        g = gram(dtm(Channel.identity(3), f.base))
        assert approx_channel_info(g, f) == pytest.approx(approx_encoding_info(f), rel=1e-12)

    def test_dtm_and_gram_agree(self, rng):
        for _ in range(20):
            f = random_family(rng, 3, 3, 0.05)
            d = dtm(random_channel(rng, 4, 3), f.base)
            assert approx_channel_info(d, f) == pytest.approx(approx_channel_info(gram(d), f), rel=1e-12)

    def test_useless_channel(self):
        f = _binary_family(0.1)
        assert approx_channel_info(dtm(bsc(0.5), f.base), f) == pytest.approx(0.0, abs=1e-18)

    def test_data_processing_in_the_quadratic(self, rng):
        for _ in range(30):
            f = random_family(rng, 3, 3, 0.05)
            d = dtm(random_channel(rng, 3, 3), f.base)
            assert approx_channel_info(d, f) <= approx_encoding_info(f) * (1 + 1e-12)


class TestOrder:
    def test_cubic_remainder(self, rng):
        for _ in range(25):
            nx = int(rng.integers(2, 5))
            f = random_family(rng, nx, int(rng.integers(2, 4)), 1e-2)
            main, eaves = random_channel(rng, 3, nx), random_channel(rng, 2, nx)
            errs = []
            for eps in (1e-2, 1e-3):
                g = PerturbationFamily(f.base, f.p_u, f.perturbations, eps)
                ex = info_triple(main, eaves, g)
                ap = info_triple(main, eaves, g, exact=False)
                errs.append(
                    np.abs(
                        np.array([ex.i_ux, ex.i_uy, ex.i_uz]) - np.array([ap.i_ux, ap.i_uy, ap.i_uz])
                    )
                )
            assert np.all(errs[0] >= 100 * errs[1])


class TestExactConsistency:
    def test_mutual_information_from_degenerate_family(self, rng):
        for _ in range(20):
            nx = int(rng.integers(2, 5))
            px = rng.dirichlet(np.ones(nx)) * 0.9 + 0.1 / nx
            ch = random_channel(rng, 3, nx)
            c = Conditionals(Distribution(px), np.eye(nx))
            assert exact_markov_info(ch, c) == pytest.approx(mutual_information(ch, px), abs=1e-14)

    def test_exact_data_processing(self, rng):
        for _ in range(50):
            f = random_family(rng, 3, 3, 0.3)
            ch = random_channel(rng, 3, 3)
            assert exact_markov_info(ch, f) <= exact_encoding_info(f) + 1e-10
