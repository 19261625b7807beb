"""Certified evaluators: series, Euler products, paired products, closed forms.

The recurring pattern: evaluate one constant along two or three independent
routes and require the enclosures to intersect.  Since each route carries a
proven tail bound, a failed intersection would expose an unsound bound.
"""

from fractions import Fraction

import pytest
from gmpy2 import mpfr

from identicheck import analytic, mpball
from identicheck.mpball import BallReal


def pi_power_oracle(num: int, power: int, den: int, prec: int = 60) -> BallReal:
    """Tight ball for num * pi^power / den."""
    return mpball.const_pi(prec).int_pow(power) * num / BallReal.from_int(den, prec)


BETA_CLOSED = {
    # beta(2n+1) = |E_2n| (pi/2)^(2n+1) / (2 (2n)!)  ->  rational * pi^s
    3: (1, 32),       # pi^3 / 32
    5: (5, 1536),     # 5 pi^5 / 1536
    7: (61, 184320),  # 61 pi^7 / 184320
    9: (1385, 41287680),
}

ZETA_CLOSED = {
    2: (1, 6), 4: (1, 90), 6: (1, 945), 8: (1, 9450), 10: (1, 93555),
}


class TestBetaRoutes:
    @pytest.mark.parametrize("s", [3, 5, 7, 9])
    def test_triple_intersection(self, s):
        prec = 30
        series = analytic.beta_series(s, prec)
        closed = analytic.beta_closed(s, prec)
        product = analytic.beta_euler_product(s, prec)
        oracle = pi_power_oracle(BETA_CLOSED[s][0], s, BETA_CLOSED[s][1])
        for enc in (series, closed, product):
            assert mpball.intersects(enc.ball, oracle)
        assert mpball.intersects(series.ball, closed.ball)
        assert mpball.intersects(series.ball, product.ball)
        assert mpball.intersects(closed.ball, product.ball)

    def test_series_truncation_pinned(self):
        # two terms: midpoint 1 - 1/27, radius >= first omitted term 1/125
        enc = analytic.beta_series(3, 8, max_terms=2)
        assert abs(float(enc.ball.mid) - 26 / 27) < 1e-12
        assert 0.008 <= float(enc.ball.rad) <= 0.009
        assert enc.capped and "max_terms=2" in enc.note
        assert enc.ball.contains is not None
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 3, 32))

    def test_series_uncapped_hits_target(self):
        enc = analytic.beta_series(9, 30)
        assert not enc.capped
        assert float(enc.ball.rad) <= 1e-30
        assert enc.terms_used < 10**4

    def test_series_tail_shrinks_with_precision(self):
        rads = [float(analytic.beta_series(5, p).ball.rad) for p in (10, 20, 30)]
        assert rads[0] > rads[1] > rads[2]

    def test_closed_form_is_tight(self):
        enc = analytic.beta_closed(9, 40)
        assert float(enc.ball.rad) < 1e-40
        assert mpball.intersects(enc.ball, pi_power_oracle(1385, 9, 41287680))

    def test_closed_form_rejects_even(self):
        with pytest.raises(ValueError):
            analytic.beta_closed(4, 20)

    def test_product_partial_is_exact_rational(self):
        # primes 3..17 only; the certified ball must still contain beta(3)
        enc = analytic.beta_euler_product(3, 15, prime_limit=17)
        assert enc.terms_used == 6  # 3, 5, 7, 11, 13, 17
        assert enc.prime_limit_used == 17
        partial = Fraction(1)
        for p in (3, 5, 7, 11, 13, 17):
            chi = 1 if p % 4 == 1 else -1
            partial *= Fraction(p**3, p**3 - chi)
        # the tail factor exp([-T, T]) recentres the midpoint by ~cosh(T)-1
        # but the exact partial product stays inside the certified ball
        assert enc.ball.contains(partial)
        assert abs(float(enc.ball.mid) - float(partial)) < 1e-5
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 3, 32))

    def test_product_requires_s_at_least_two(self):
        with pytest.raises(ValueError):
            analytic.beta_euler_product(1, 20)

    def test_product_cap_note(self):
        enc = analytic.beta_euler_product(3, 30, prime_limit=100)
        assert enc.capped
        assert "prime_limit=100" in enc.note
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 3, 32))


class TestZetaRoutes:
    @pytest.mark.parametrize("two_m", [2, 4, 6, 8, 10])
    def test_triple_intersection(self, two_m):
        prec = 25
        series = analytic.zeta_even_series(two_m, prec)
        closed = analytic.zeta_closed_even(two_m, prec)
        product = analytic.zeta_euler_product(two_m, prec)
        num, den = ZETA_CLOSED[two_m]
        oracle = pi_power_oracle(num, two_m, den)
        for enc in (series, closed, product):
            assert mpball.intersects(enc.ball, oracle), f"2m={two_m}"
        assert mpball.intersects(series.ball, closed.ball)
        assert mpball.intersects(series.ball, product.ball)

    def test_series_truncation_pinned(self):
        # two terms of zeta(2): midpoint 5/4, radius >= integral tail 1/2
        enc = analytic.zeta_even_series(2, 8, max_terms=2)
        assert float(enc.ball.mid) == 1.25
        assert float(enc.ball.rad) >= 0.5
        assert enc.capped

    def test_sharp_tail_recentres(self):
        # with the two-sided integral bound the s = 2 series reaches 1e-14
        # within the default cap even though 1e14 plain terms would be needed
        enc = analytic.zeta_even_series(2, 12)
        assert float(enc.ball.rad) < 2e-14
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 2, 6))

    def test_rejects_odd_or_small(self):
        for bad in (1, 3, 0, -2):
            with pytest.raises(ValueError):
                analytic.zeta_even_series(bad, 10)
        with pytest.raises(ValueError):
            analytic.zeta_closed_even(3, 10)

    def test_product_includes_two(self):
        # with only p = 2 the partial product is 4/3; the one-sided tail
        # factor exp([0, T]) keeps it at the ball's lower edge
        enc = analytic.zeta_euler_product(2, 6, prime_limit=2)
        assert enc.ball.contains(Fraction(4, 3))
        assert not enc.ball.contains(1)  # 1 is well below the p=2 partial
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 2, 6))

    def test_product_capped(self):
        enc = analytic.zeta_euler_product(2, 10, prime_limit=1000)
        assert enc.capped and "prime_limit=1000" in enc.note
        assert float(enc.ball.rad) < 2e-3
        assert mpball.intersects(enc.ball, pi_power_oracle(1, 2, 6))


class TestOddProducts:
    """prod over odd k of (1 - (-1)^k (2k+1)^-s), both routes."""

    @pytest.mark.parametrize("s", list(range(1, 9)))
    def test_direct_matches_closed(self, s):
        prec = 12
        direct = analytic.odd_product_direct(s, prec)
        closed = analytic.odd_product_closed(s, prec)
        assert mpball.intersects(direct.ball, closed.ball), f"s={s}"
        worst = mpball._max(direct.ball.rad, closed.ball.rad)
        assert worst < mpfr("1e-8"), f"s={s}: {worst}"

    def test_closed_s1_is_pi_root2_over_4(self):
        prec = 60
        enc = analytic.odd_product_closed(1, prec)
        oracle = (mpball.const_pi(prec) * mpball.sqrt(BallReal.from_int(2, prec))
                  / BallReal.from_int(4, prec))
        assert mpball.intersects(enc.ball, oracle)
        assert mpball.midpoint_distance_upper(enc.ball, oracle) < mpfr("1e-50")

    def test_closed_s3_matches_cosh_expression(self):
        # pi/12 + (pi sqrt(2) / 12) cosh(pi sqrt(3) / 4); note the sqrt(3)
        # inside cosh -- the sqrt(2) variant differs by ~0.146 and is the
        # misprint the corpus refutes
        prec = 60
        enc = analytic.odd_product_closed(3, prec)
        pi_ball = mpball.const_pi(prec)
        rt2 = mpball.sqrt(BallReal.from_int(2, prec))
        rt3 = mpball.sqrt(BallReal.from_int(3, prec))
        twelve = BallReal.from_int(12, prec)
        oracle = pi_ball / twelve + (pi_ball * rt2 / twelve) * mpball.cosh(
            pi_ball * rt3 / BallReal.from_int(4, prec))
        assert mpball.intersects(enc.ball, oracle)
        assert mpball.midpoint_distance_upper(enc.ball, oracle) < mpfr("1e-50")

    def test_closed_s3_refutes_sqrt2_misprint(self):
        prec = 40
        enc = analytic.odd_product_closed(3, prec)
        pi_ball = mpball.const_pi(prec)
        rt2 = mpball.sqrt(BallReal.from_int(2, prec))
        twelve = BallReal.from_int(12, prec)
        misprint = pi_ball / twelve + (pi_ball * rt2 / twelve) * mpball.cosh(
            pi_ball * rt2 / BallReal.from_int(4, prec))
        gap = mpball.certified_gap(enc.ball, misprint)
        assert float(gap) > 0.14

    def test_direct_small_pair_count_still_sound(self):
        prec = 20
        enc = analytic.odd_product_direct(1, prec, max_pairs=10**4)
        oracle = (mpball.const_pi(40) * mpball.sqrt(BallReal.from_int(2, 40))
                  / BallReal.from_int(4, 40))
        assert enc.capped
        assert mpball.intersects(enc.ball, oracle)

    def test_direct_s1_certifies_many_digits(self):
        enc = analytic.odd_product_direct(1, 20)
        assert float(enc.ball.rad) < 1e-14  # second-order tail treatment

    def test_direct_even_s(self):
        enc = analytic.odd_product_direct(2, 15)
        closed = analytic.odd_product_closed(2, 15)
        assert mpball.intersects(enc.ball, closed.ball)

    def test_closed_rejects_bad_s(self):
        with pytest.raises(ValueError):
            analytic.odd_product_closed(0, 10)


class TestAcceleratedSum:
    def test_sits_inside_rigorous_enclosure(self):
        for s in (3, 5, 9):
            rigorous = analytic.beta_series(s, 30)
            fast = analytic.accelerated_alt_sum(lambda k, s=s: Fraction(1, (2 * k + 1) ** s), 30)
            assert not fast.rigorous
            assert "estimate" in fast.note
            assert rigorous.ball.contains(fast.ball.mid)

    def test_far_fewer_terms(self):
        rigorous = analytic.beta_series(3, 30)
        fast = analytic.accelerated_alt_sum(lambda k: Fraction(1, (2 * k + 1) ** 3), 30)
        assert fast.terms_used < 100 < rigorous.terms_used


class TestGuards:
    def test_budget_validation(self):
        with pytest.raises(ValueError):
            analytic.beta_series(3, 30, max_terms=0)
        with pytest.raises(ValueError):
            analytic.beta_euler_product(3, 30, prime_limit=0)

    def test_exponent_ceiling(self):
        with pytest.raises(ValueError):
            analytic.beta_series(1001, 10)

    def test_enclosure_metadata(self):
        enc = analytic.beta_euler_product(5, 20)
        assert enc.terms_used > 0
        assert enc.prime_limit_used is not None
        assert enc.tail.technique
        series = analytic.beta_series(5, 20)
        assert series.prime_limit_used is None
