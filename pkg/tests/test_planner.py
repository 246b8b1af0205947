import math

import numpy as np
import pytest

from rotbench import planner
from rotbench.qmath import S, X

THETA = math.pi / 4

# reference theoretical success probabilities (5 decimals)
TABLE1 = {2: 0.62500, 4: 0.57031, 5: 0.59570, 6: 0.58252, 7: 0.58899,
          8: 0.58572}


class TestChooseN:
    def test_half(self):
        assert planner.choose_n(0.5) == 2

    def test_tenth(self):
        assert planner.choose_n(0.1) == 5

    def test_fine(self):
        assert planner.choose_n(2.6e-4) == 13

    def test_domain(self):
        with pytest.raises(ValueError):
            planner.choose_n(0.0)
        with pytest.raises(ValueError):
            planner.choose_n(-1.0)


class TestChooseK:
    def test_n2(self):
        assert planner.choose_k(THETA, 2) == 3

    def test_n3(self):
        assert planner.choose_k(THETA, 3) == 6

    def test_n8(self):
        assert planner.choose_k(THETA, 8) == 181

    def test_angle_domain(self):
        with pytest.raises(ValueError):
            planner.choose_k(math.pi / 2, 4)
        with pytest.raises(ValueError):
            planner.choose_k(-math.pi / 2, 4)

    def test_round_half_up(self):
        # tan(theta/2) = 1/8 exactly at theta = 2 atan(1/8): floor(x + 1/2)
        # rounds the .5 boundary upward
        theta = 2 * math.atan(3 / 16)  # 8 * tan = 1.5 -> k = 8 + 2
        assert planner.choose_k(theta, 4) == 10


class TestReduce:
    def test_already_odd(self):
        assert planner.reduce_k(3, 2) == (3, 2)

    def test_single_halving(self):
        assert planner.reduce_k(6, 3) == (3, 2)

    def test_double_halving(self):
        assert planner.reduce_k(180, 8) == (45, 6)

    def test_preserves_ratio_bit_exact(self):
        for k, n in ((6, 3), (180, 8), (44, 6)):
            k2, n2 = planner.reduce_k(k, n)
            before = (k - (1 << (n - 1))) / (1 << (n - 1))
            after = (k2 - (1 << (n2 - 1))) / (1 << (n2 - 1))
            assert before == after  # exact halving of dyadic rationals

    def test_theta_star_invariant(self):
        assert planner.theta_star(6, 3) == pytest.approx(
            planner.theta_star(3, 2), abs=0)


class TestThetaStar:
    def test_n2_is_arccos_3_5(self):
        assert planner.theta_star(3, 2) == pytest.approx(
            math.acos(3 / 5), abs=1e-12)
        assert planner.theta_star(3, 2) == pytest.approx(0.9272952, abs=1e-7)

    def test_n8_angle_error(self):
        err = THETA - planner.theta_star(181, 8)
        assert err == pytest.approx(2.579e-4, abs=5e-7)

    def test_zero_numerator(self):
        assert planner.theta_star(8, 4) == 0.0


class TestSuccessProbability:
    @pytest.mark.parametrize("n,want", sorted(TABLE1.items()))
    def test_reference_rows(self, n, want):
        k = planner.choose_k(THETA, n)
        assert abs(planner.success_probability(k, n) - want) <= 5e-6

    def test_degenerate_half(self):
        assert planner.success_probability(8, 4) == 0.5

    def test_against_marked_operator_norm(self):
        # independent route: norm of (k S + (2^n - k) XSX) / 2^n columns
        for n in (2, 4, 5, 6, 7, 8):
            k = planner.choose_k(THETA, n)
            op = (k * S + (2 ** n - k) * (X @ S @ X)) / 2 ** n
            p = np.linalg.norm(op[:, 0]) ** 2
            assert abs(planner.success_probability(k, n) - p) < 1e-12


class TestPlan:
    def test_epsilon_route(self):
        pl = planner.plan(THETA, epsilon=0.1)
        assert pl.n == 5 and pl.k == 23 and pl.reduced

    def test_forced_n_no_reduce(self):
        pl = planner.plan(THETA, n=3, no_reduce=True)
        assert pl.n == 3 and pl.k == 6 and not pl.reduced
        assert pl.theta_star == planner.plan(THETA, n=2).theta_star

    def test_forced_n_reduces(self):
        pl = planner.plan(THETA, n=3)
        assert (pl.n, pl.k) == (2, 3)

    def test_requires_exactly_one_of(self):
        with pytest.raises(ValueError):
            planner.plan(THETA)
        with pytest.raises(ValueError):
            planner.plan(THETA, epsilon=0.1, n=4)

    def test_eq3_bound(self):
        # |theta - theta*| <= 2^(1-n) for every n
        for n in range(2, 9):
            k = planner.choose_k(THETA, n)
            err = abs(THETA - planner.theta_star(k, n))
            assert err <= 2.0 ** (1 - n)

    def test_epsilon_bound_over_grid(self):
        # the realized angle honors the requested tolerance whenever n is
        # derived from it
        rng = np.random.default_rng(41)
        for _ in range(200):
            theta = float(rng.uniform(0.2, 1.2)) * rng.choice([-1, 1])
            eps = float(rng.uniform(5e-4, 0.3))
            pl = planner.plan(theta, epsilon=eps)
            assert abs(theta - pl.theta_star) <= eps

    def test_success_strictly_above_half(self):
        for n in range(2, 9):
            pl = planner.plan(THETA, n=n, no_reduce=True)
            assert pl.p_success > 0.5
