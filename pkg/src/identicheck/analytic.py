"""Certified evaluators for the series and products behind the corpus.

Each evaluator returns an :class:`Enclosure`: a ball that provably contains
the exact limit, plus an auditable record of the tail-bound technique that
accounts for every omitted term or factor.  Two execution paths exist for
the heavy partial sums/products and are chosen deterministically:

* an exact-rational path — terms are built as exact ``mpq`` values and
  accumulated into directed lower/upper rounding contexts, so the partial
  sum interval is exact up to one rounding per operation; and
* a double-double kernel path (``identicheck.kernels``) — roughly 32
  significant digits per term at C speed, with the documented per-operation
  error model folded into the radius.

The router compares the certified digits each path could deliver under the
caller's budget and picks the better one (ties favour the faster kernel).
Routing uses float estimates only to *choose*; every bound that enters a
radius is recomputed rigorously on the chosen truncation point.

Tail techniques
---------------
``alternating-next-term``
    For alternating series with decreasing terms the omitted tail is no
    larger than the first omitted term.
``integral-comparison``
    For monotone convex positive terms, midpoint/endpoint integral
    comparison gives two-sided tail bounds (sums) or a bound on the log of
    the omitted factor (Euler products).
``paired-product``
    For the alternating product over odd integers, consecutive factors are
    paired so the log of each combined factor is O(j^{-s-1}); the omitted
    log-tail is enclosed by integral comparison plus explicit second- and
    third-order corrections.
``stirling-remainder``
    Closed forms built from Gamma enclosures inherit the truncated Stirling
    series' certified remainder (already inside the ball radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from . import kernels, mpball
from .mpball import BallComplex, BallError, BallReal, bits_for_digits, widened

__all__ = [
    "Enclosure",
    "TailBound",
    "accelerated_alt_sum",
    "beta_closed",
    "beta_euler_product",
    "beta_series",
    "odd_product_closed",
    "odd_product_direct",
    "zeta_closed_even",
    "zeta_euler_product",
    "zeta_even_series",
]


@dataclass(frozen=True)
class TailBound:
    """Audit record for the omitted tail of a truncated sum/product."""

    technique: str  # one of the techniques documented in the module docstring
    value: BallReal  # upper bound on the omitted tail's absolute contribution


@dataclass(frozen=True)
class Enclosure:
    """A certified ball together with how its truncation error was bounded.

    ``capped`` is set when the budget (term/pair/prime limits or the
    double-double rounding floor) stopped the evaluator short of its
    precision target; ``note`` then names the binding constraint.  The ball
    is still a valid enclosure — just wider than requested.
    """

    ball: BallReal
    tail: Optional[TailBound]
    terms_used: int
    capped: bool = False
    rigorous: bool = True
    note: str = ""
    prime_limit_used: Optional[int] = None


# --- deterministic routing ----------------------------------------------------

_KERNEL_MIN = 10_000  # below this many items the exact-rational path is instant
_MP_CAP = 400_000  # most items the exact-rational path will grind through
_MP_PRIME_CAP = 2_000_000  # largest prime limit for the exact-rational path
_LOG10_EPS = -97 * math.log10(2.0)  # per-operation double-double error model
_TIE_DIGITS = 0.1  # kernel wins unless the exact path is clearly better


def _eps_log10(ops: float) -> float:
    return math.log10(max(ops, 1.0)) + _LOG10_EPS


def _smallest_n(width_log10: Callable[[int], float], goal_log10: float, hi: int) -> int:
    """Smallest n in [1, hi] with width_log10(n) <= goal, else hi.

    Purely a routing estimate; rigor never depends on the returned value.
    """
    if width_log10(1) <= goal_log10:
        return 1
    if width_log10(hi) > goal_log10:
        return hi
    lo = 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if width_log10(mid) <= goal_log10:
            hi = mid
        else:
            lo = mid
    return hi


def _route(
    n_target: int,
    cap: int,
    *,
    s: int,
    max_base: Callable[[int], int],
    ops_per_item: Callable[[int], float],
    width_log10: Callable[[int], float],
    mp_cap: int,
) -> tuple[str, int]:
    """Pick ("kernel"|"mp", n) deterministically for a truncation budget.

    The kernel candidate shrinks on a halving grid while its rounding floor
    dominates the truncation width (halving then costs no certified digits
    and saves time); the exact-rational candidate is capped at ``mp_cap``.
    """
    n_full = max(1, min(n_target, cap))
    n_mp = min(n_full, mp_cap)
    d_mp = -width_log10(n_mp)

    n_k = n_full
    kernel_ok = n_k >= _KERNEL_MIN and kernels.fits(n_k, s, max_base(n_k))
    if kernel_ok:
        while n_k // 2 >= _KERNEL_MIN and _eps_log10(ops_per_item(n_k // 2) * (n_k // 2)) >= width_log10(n_k // 2):
            n_k //= 2
        d_k = -max(width_log10(n_k), _eps_log10(ops_per_item(n_k) * n_k))
        if d_k >= d_mp - _TIE_DIGITS:
            return "kernel", n_k
    return "mp", n_mp


# --- accumulation primitives ---------------------------------------------------


def _dir_sum(terms, bits: int) -> tuple[mpfr, mpfr]:
    """Directed interval sum of exact signed mpq terms."""
    dn, up = mpball._ctxs(bits)
    lo = mpfr(0)
    hi = mpfr(0)
    for positive, q in terms:
        if positive:
            lo = dn.add(lo, q)
            hi = up.add(hi, q)
        else:
            lo = dn.sub(lo, q)
            hi = up.sub(hi, q)
    return lo, hi


def _dir_prod(factors, bits: int) -> tuple[mpfr, mpfr]:
    """Directed interval product of exact positive mpq factors."""
    dn, up = mpball._ctxs(bits)
    lo = mpfr(1)
    hi = mpfr(1)
    for q in factors:
        lo = dn.mul(lo, q)
        hi = up.mul(hi, q)
    return lo, hi


def _ball_from_dd(hi: float, lo: float, ops: int, prec: int) -> BallReal:
    """Ball around a double-double kernel result, radius from its error model."""
    mid = BallReal.from_fraction(Fraction(hi) + Fraction(lo), prec)
    return widened(mid, kernels.eps_bound(ops))


def _frac_ball(f: Fraction, prec: int) -> BallReal:
    return BallReal.from_fraction(f, prec)


def _point_upper(x: BallReal) -> BallReal:
    """Point ball at the upper bound of x (for TailBound audit values)."""
    u = x.upper()
    return BallReal.from_endpoints(u, u, x.prec)


# --- Dirichlet beta ------------------------------------------------------------


def _check_budget(name: str, value: int, minimum: int) -> int:
    if not isinstance(value, int) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def _check_exponent(s: int, minimum: int = 1) -> int:
    if not isinstance(s, int) or s < minimum:
        raise ValueError(f"exponent must be an integer >= {minimum}, got {s!r}")
    if s > 1000:
        raise ValueError(f"exponent {s} is larger than supported (max 1000)")
    return s


def beta_series(s: int, prec: int, max_terms: int = 10**7) -> Enclosure:
    """Alternating series sum_{k>=0} (-1)^k / (2k+1)^s.

    Truncation keeps N terms; the omitted alternating tail is bounded by its
    first omitted term (2N+1)^{-s}, added to the radius without shifting the
    midpoint.
    """
    s = _check_exponent(s)
    prec = _check_budget("prec", prec, 1)
    max_terms = _check_budget("max_terms", max_terms, 1)

    goal = -(prec + 2)
    wlog = lambda n: -s * math.log10(2.0 * n + 1.0)
    n_target = _smallest_n(wlog, goal, 10**15)
    path, n = _route(
        n_target,
        max_terms,
        s=s,
        max_base=lambda n: 2 * n + 1,
        ops_per_item=lambda n: kernels.mul_count(s) + 2,
        width_log10=wlog,
        mp_cap=_MP_CAP,
    )

    if path == "kernel":
        hi, lo, ops = kernels.alt_odd_power_sum(n, s)
        partial = _ball_from_dd(hi, lo, ops, prec)
    else:
        terms = ((k % 2 == 0, mpq(1, (2 * k + 1) ** s)) for k in range(n))
        lo_e, hi_e = _dir_sum(terms, bits_for_digits(prec))
        partial = BallReal.from_endpoints(lo_e, hi_e, prec)

    tail_frac = Fraction(1, (2 * n + 1) ** s)
    tail_ball = _frac_ball(tail_frac, prec)
    ball = widened(partial, tail_ball.upper())
    capped, note = _cap_note(ball, prec, n, n_target, max_terms, "max_terms")
    return Enclosure(
        ball=ball,
        tail=TailBound("alternating-next-term", _point_upper(tail_ball)),
        terms_used=n,
        capped=capped,
        note=note,
    )


def beta_closed(s: int, prec: int) -> Enclosure:
    """Closed form for odd s = 2n+1: |E_{2n}| * (pi/2)^{2n+1} / (2*(2n)!)."""
    s = _check_exponent(s)
    prec = _check_budget("prec", prec, 1)
    if s % 2 == 0:
        raise ValueError(f"no closed form implemented for even exponent {s}")
    from . import exactseq

    n = (s - 1) // 2
    coeff = Fraction(abs(exactseq.euler_number(2 * n)), 2 * exactseq.factorial(2 * n))
    half_pi = mpball.const_pi(prec) / 2
    ball = _frac_ball(coeff, prec) * half_pi.int_pow(s)
    return Enclosure(ball=ball, tail=None, terms_used=0)


def beta_euler_product(s: int, prec: int, prime_limit: int = 10**6) -> Enclosure:
    """Euler product over odd primes: prod_p p^s / (p^s - chi4(p)).

    Requires s >= 2: at s = 1 the omitted factors' logs decay like 1/(p ln p)
    and no finite prime cut gives a useful certified bound.  The omitted
    log-tail tau satisfies |tau| <= sum_{n>P} 2 n^{-s} <= 2 P^{1-s}/(s-1), so
    the partial product is multiplied by exp([-T, T]).
    """
    s = _check_exponent(s, 2)
    prec = _check_budget("prec", prec, 1)
    prime_limit = _check_budget("prime_limit", prime_limit, 3)
    from . import exactseq

    goal = -(prec + 2)
    wlog = lambda P: math.log10(2.0 / (s - 1)) + (1 - s) * math.log10(float(P))
    p_target = _smallest_n(wlog, goal, 10**18)
    path, P = _route(
        p_target,
        prime_limit,
        s=s,
        max_base=lambda P: P,
        ops_per_item=lambda P: (kernels.mul_count(s) + 3) * _prime_density(P),
        width_log10=wlog,
        mp_cap=_MP_PRIME_CAP,
    )
    P = max(P, 3)
    primes = exactseq.odd_primes(P)

    if path == "kernel" and len(primes) >= 1:
        hi, lo, ops = kernels.prime_product(primes.values, s, 1)
        partial = _ball_from_dd(hi, lo, ops, prec)
    else:
        factors = (
            mpq(ps, ps - (1 if p % 4 == 1 else -1))
            for p in primes
            for ps in ((p**s),)
        )
        lo_e, hi_e = _dir_prod(factors, bits_for_digits(prec))
        partial = BallReal.from_endpoints(lo_e, hi_e, prec)

    t_frac = Fraction(2, (s - 1) * P ** (s - 1))
    t_ball = _frac_ball(t_frac, prec)
    t_up = t_ball.upper()
    factor = mpball.exp(BallReal.from_endpoints(-t_up, t_up, prec))
    ball = partial * factor
    capped, note = _cap_note(ball, prec, P, p_target, prime_limit, "prime_limit")
    return Enclosure(
        ball=ball,
        tail=TailBound("integral-comparison", _point_upper(t_ball)),
        terms_used=len(primes),
        capped=capped,
        note=note,
        prime_limit_used=P,
    )


# --- Riemann zeta at even integers ---------------------------------------------

_SHARP_MIN_N = 16  # below this, keep the plain one-sided integral tail


def zeta_even_series(two_m: int, prec: int, max_terms: int = 10**7) -> Enclosure:
    """Series sum_{k>=1} k^{-2m} with a two-sided integral tail bound.

    For N >= 16 the omitted tail sigma = sum_{k>N} k^{-s} is enclosed by
    midpoint/endpoint integral comparison of the convex integrand:
    T(N+1) <= sigma <= T(N+1/2) with T(x) = x^{1-s}/(s-1), and that interval
    is *added* to the partial sum (sharpening the enclosure by recentring).
    For smaller N the plain one-sided bound sigma <= T(N) is put entirely
    into the radius.
    """
    s = _check_exponent(two_m, 2)
    if s % 2 != 0:
        raise ValueError(f"exponent must be an even integer >= 2, got {s}")
    prec = _check_budget("prec", prec, 1)
    max_terms = _check_budget("max_terms", max_terms, 1)

    goal = -(prec + 2)

    def wlog(n: int) -> float:
        if n < _SHARP_MIN_N:
            return (1 - s) * math.log10(float(n)) - math.log10(s - 1.0)
        return -s * math.log10(float(n)) - math.log10(4.0)

    n_target = _smallest_n(wlog, goal, 10**15)
    path, n = _route(
        n_target,
        max_terms,
        s=s,
        max_base=lambda n: n,
        ops_per_item=lambda n: kernels.mul_count(s) + 2,
        width_log10=wlog,
        mp_cap=_MP_CAP,
    )

    if path == "kernel":
        hi, lo, ops = kernels.power_sum(n, s)
        partial = _ball_from_dd(hi, lo, ops, prec)
    else:
        terms = ((True, mpq(1, k**s)) for k in range(1, n + 1))
        lo_e, hi_e = _dir_sum(terms, bits_for_digits(prec))
        partial = BallReal.from_endpoints(lo_e, hi_e, prec)

    if n >= _SHARP_MIN_N:
        t_lo = Fraction(1, (s - 1) * (n + 1) ** (s - 1))
        t_hi = Fraction(2 ** (s - 1), (s - 1) * (2 * n + 1) ** (s - 1))
        tail_ball = BallReal.from_endpoints(
            _frac_ball(t_lo, prec).lower(), _frac_ball(t_hi, prec).upper(), prec
        )
        ball = partial + tail_ball
        audit = _frac_ball(t_hi, prec)
    else:
        t_frac = Fraction(1, (s - 1) * n ** (s - 1))
        audit = _frac_ball(t_frac, prec)
        ball = widened(partial, audit.upper())

    capped, note = _cap_note(ball, prec, n, n_target, max_terms, "max_terms")
    return Enclosure(
        ball=ball,
        tail=TailBound("integral-comparison", _point_upper(audit)),
        terms_used=n,
        capped=capped,
        note=note,
    )


def zeta_closed_even(two_m: int, prec: int) -> Enclosure:
    """Closed form zeta(2m) = |B_{2m}| * (2 pi)^{2m} / (2 * (2m)!)."""
    s = _check_exponent(two_m, 2)
    if s % 2 != 0:
        raise ValueError(f"exponent must be an even integer >= 2, got {s}")
    prec = _check_budget("prec", prec, 1)
    from . import exactseq

    coeff = abs(exactseq.bernoulli_modern_even(s)) / (2 * exactseq.factorial(s))
    two_pi = mpball.const_pi(prec) * 2
    ball = _frac_ball(coeff, prec) * two_pi.int_pow(s)
    return Enclosure(ball=ball, tail=None, terms_used=0)


def zeta_euler_product(two_m: int, prec: int, prime_limit: int = 10**6) -> Enclosure:
    """Euler product over all primes (2 included): prod_p 1/(1 - p^{-2m}).

    The omitted log-tail lies in [0, T] with
    T = P^{1-s} / ((s-1) * (1 - 2^{-s})), so the partial product is
    multiplied by exp([0, T]).
    """
    s = _check_exponent(two_m, 2)
    if s % 2 != 0:
        raise ValueError(f"exponent must be an even integer >= 2, got {s}")
    prec = _check_budget("prec", prec, 1)
    prime_limit = _check_budget("prime_limit", prime_limit, 2)
    from . import exactseq

    goal = -(prec + 2)
    wlog = lambda P: (1 - s) * math.log10(float(P)) - math.log10((s - 1.0) * (1 - 0.5**s))
    p_target = _smallest_n(wlog, goal, 10**18)
    path, P = _route(
        p_target,
        prime_limit,
        s=s,
        max_base=lambda P: P,
        ops_per_item=lambda P: (kernels.mul_count(s) + 3) * _prime_density(P),
        width_log10=wlog,
        mp_cap=_MP_PRIME_CAP,
    )
    P = max(P, 2)
    if P >= 3:
        odd = exactseq.odd_primes(P).values
        primes = np.concatenate((np.array([2], dtype=np.int64), odd))
    else:
        primes = np.array([2], dtype=np.int64)

    if path == "kernel" and len(primes) >= 1:
        hi, lo, ops = kernels.prime_product(primes, s, 0)
        partial = _ball_from_dd(hi, lo, ops, prec)
    else:
        factors = (mpq(ps, ps - 1) for p in primes.tolist() for ps in (p**s,))
        lo_e, hi_e = _dir_prod(factors, bits_for_digits(prec))
        partial = BallReal.from_endpoints(lo_e, hi_e, prec)

    t_frac = Fraction(2**s, (s - 1) * (2**s - 1) * P ** (s - 1))
    t_ball = _frac_ball(t_frac, prec)
    factor = mpball.exp(BallReal.from_endpoints(mpfr(0), t_ball.upper(), prec))
    ball = partial * factor
    capped, note = _cap_note(ball, prec, P, p_target, prime_limit, "prime_limit")
    return Enclosure(
        ball=ball,
        tail=TailBound("integral-comparison", _point_upper(t_ball)),
        terms_used=len(primes),
        capped=capped,
        note=note,
        prime_limit_used=P,
    )


# --- the alternating product over odd integers ----------------------------------


def odd_product_direct(s: int, prec: int, max_pairs: int = 10**7) -> Enclosure:
    """prod_{k>=1} (1 - (-1)^k / (2k+1)^s) by paired truncation.

    Consecutive factors are paired: pair j multiplies the k=2j-1 and k=2j
    factors, (1 + (4j-1)^{-s}) * (1 - (4j+1)^{-s}), and the log of the
    omitted pairs tau = sum_{j>J} log f_j is enclosed rigorously as follows.
    With u = (4j-1)^{-s}, v = (4j+1)^{-s} (both <= 1/7 for j > J >= 1):

        log f_j = h(j) - q(j) + c(j),
        h = u - v,  q = (u^2 + v^2)/2,  |c| <= (u^3 + v^3)/2.

    * sum h over j > J: h is positive, decreasing and convex, so midpoint /
      endpoint integral comparison gives I(J+1) <= sum <= I(J+1/2) with
      I(a) = [(4a-1)^{1-s} - (4a+1)^{1-s}] / (4(s-1))  (log ratio at s = 1).
    * sum q: the bases 4j-1, 4j+1 for j > J are exactly the odd integers
      >= 4J+3, so 2*sum q = sum_{odd m >= M} m^{-2s} with M = 4J+3, enclosed
      by [M^{1-t}, (M-1)^{1-t}]/(2(t-1)) with t = 2s (step-2 midpoint rule).
    * sum |c| <= (1/2) sum_{odd m >= M} m^{-3s} <= (M-1)^{1-3s}/(4(3s-1)).

    The partial product is then multiplied by exp(tau-interval).
    """
    s = _check_exponent(s)
    prec = _check_budget("prec", prec, 1)
    max_pairs = _check_budget("max_pairs", max_pairs, 1)

    goal = -(prec + 2)

    def wlog(J: int) -> float:
        l4j = math.log10(4.0 * J)
        w1 = math.log10(float(s)) - (s + 1) * l4j  # integral-bracket width
        w2 = -2 * s * l4j - math.log10(2.0)  # second-order bracket width
        w3 = (1 - 3 * s) * l4j - math.log10(4.0 * (3 * s - 1))  # third-order bound
        top = max(w1, w2, w3)
        return top + math.log10(
            10.0 ** (w1 - top) + 10.0 ** (w2 - top) + 10.0 ** (w3 - top)
        )

    j_target = _smallest_n(wlog, goal, 10**15)
    path, J = _route(
        j_target,
        max_pairs,
        s=s,
        max_base=lambda J: 4 * J + 1,
        ops_per_item=lambda J: 2 * (kernels.mul_count(s) + 1) + 4,
        width_log10=wlog,
        mp_cap=_MP_CAP,
    )

    if path == "kernel":
        hi, lo, ops = kernels.paired_odd_product(J, s)
        partial = _ball_from_dd(hi, lo, ops, prec)
    else:
        factors = (
            mpq(((a + 1) * (b - 1)), a * b)
            for j in range(1, J + 1)
            for a in ((4 * j - 1) ** s,)
            for b in ((4 * j + 1) ** s,)
        )
        lo_e, hi_e = _dir_prod(factors, bits_for_digits(prec))
        partial = BallReal.from_endpoints(lo_e, hi_e, prec)

    tau = _paired_log_tail(J, s, prec)
    ball = partial * mpball.exp(tau)
    tau_mag = mpball._max(mpball._rup_abs(tau.lower()), mpball._rup_abs(tau.upper()))
    capped, note = _cap_note(ball, prec, J, j_target, max_pairs, "max_pairs")
    return Enclosure(
        ball=ball,
        tail=TailBound("paired-product", BallReal.from_endpoints(tau_mag, tau_mag, prec)),
        terms_used=J,
        capped=capped,
        note=note,
    )


def _paired_log_tail(J: int, s: int, prec: int) -> BallReal:
    """Enclosure of tau = sum_{j>J} log f_j per the odd_product_direct notes."""

    def integral(a4m1: int, a4p1: int) -> BallReal:
        # I(a) with 4a-1 = a4m1, 4a+1 = a4p1
        if s == 1:
            return mpball.ln(_frac_ball(Fraction(a4p1, a4m1), prec)) / 4
        c = Fraction(1, 4 * (s - 1))
        diff = Fraction(1, a4m1 ** (s - 1)) - Fraction(1, a4p1 ** (s - 1))
        return _frac_ball(c * diff, prec)

    a_hi = integral(4 * J + 1, 4 * J + 3)  # I(J + 1/2)
    a_lo = integral(4 * J + 3, 4 * J + 5)  # I(J + 1)

    M = 4 * J + 3
    t = 2 * s
    q_lo = _frac_ball(Fraction(1, 4 * (t - 1) * M ** (t - 1)), prec)
    q_hi = _frac_ball(Fraction(1, 4 * (t - 1) * (M - 1) ** (t - 1)), prec)
    c3 = _frac_ball(Fraction(1, 4 * (3 * s - 1) * (M - 1) ** (3 * s - 1)), prec)

    lower = (a_lo - q_hi - c3).lower()
    upper = (a_hi - q_lo + c3).upper()
    return BallReal.from_endpoints(lower, upper, prec)


def odd_product_closed(s: int, prec: int) -> Enclosure:
    """Gamma closed form of the paired product, via the 2s-th roots of unity.

    With zeta_j = exp(2 pi i j / s) and xi_j = exp(i pi (2j+1) / s),

        P(s) = prod_{j=0}^{s-1} Gamma(5/4) Gamma(3/4)
               / ( Gamma(1 + (1 - zeta_j)/4) * Gamma((3 - xi_j)/4) ).

    Both root families are closed under conjugation, so the denominator is
    assembled in conjugate pairs g * conj(g); each pair's imaginary
    enclosure must contain 0 and is discarded after that containment check.
    A balance assertion (sum of all roots of both families encloses 0)
    guards the root construction itself.
    """
    s = _check_exponent(s)
    prec = _check_budget("prec", prec, 1)

    pi_ball = mpball.const_pi(prec)
    zero = BallReal.exact_zero(prec)

    def unit_root(num: int, den: int) -> BallComplex:
        # exp(i * pi * num / den), built from the pi enclosure
        theta = pi_ball * _frac_ball(Fraction(num, den), prec)
        return BallComplex(zero, theta).exp()

    zetas = [unit_root(2 * j, s) for j in range(s)]
    xis = [unit_root(2 * j + 1, s) for j in range(s)]

    balance = zetas[0]
    for r in zetas[1:] + xis:
        balance = balance + r
    if not (balance.re.contains_zero() and balance.im.contains_zero()):
        raise BallError("root-of-unity balance check failed: sums do not enclose 0")

    quarter = _frac_ball(Fraction(1, 4), prec)
    one = BallReal.from_int(1, prec)
    three = BallReal.from_int(3, prec)

    def gamma_of(root: BallComplex, kind: str) -> BallComplex:
        if kind == "zeta":
            # 1 + (1 - root)/4, with (1 - root) = (1 - re, -im)
            w = BallComplex(one + (one - root.re) * quarter, (zero - root.im) * quarter)
        else:
            w = BallComplex((three - root.re) * quarter, (zero - root.im) * quarter)
        return mpball.gamma(w)

    def conj_paired(roots, partner_of, kind: str) -> BallReal:
        out = BallReal.from_int(1, prec)
        done = [False] * len(roots)
        for j in range(len(roots)):
            if done[j]:
                continue
            p = partner_of(j)
            done[j] = True
            g = gamma_of(roots[j], kind)
            if p == j:
                # self-conjugate root: the argument is real
                if not g.im.contains_zero():
                    raise BallError("conjugate pairing: imaginary part fails to enclose 0")
                out = out * g.re
            else:
                done[p] = True
                pair = g * g.conj()
                if not pair.im.contains_zero():
                    raise BallError("conjugate pairing: imaginary part fails to enclose 0")
                out = out * pair.re
        return out

    d1 = conj_paired(zetas, lambda j: (s - j) % s, "zeta")
    d2 = conj_paired(xis, lambda j: s - 1 - j, "xi")

    g54 = mpball.gamma(one + quarter)
    g34 = mpball.gamma(three * quarter)
    numer = (g54 * g34).int_pow(s)
    ball = numer / (d1 * d2)
    rad_pt = BallReal.from_endpoints(ball.rad, ball.rad, prec)
    return Enclosure(
        ball=ball,
        tail=TailBound("stirling-remainder", rad_pt),
        terms_used=s,
    )


# --- heuristic acceleration ------------------------------------------------------


def accelerated_alt_sum(term: Callable[[int], Fraction], prec: int) -> Enclosure:
    """Chebyshev-polynomial acceleration of sum_{k>=0} (-1)^k a_k (heuristic).

    Delivers roughly ``prec`` digits from about 1.31 * prec terms.  The
    returned radius is the conventional (3 + sqrt 8)^{-n} error *estimate* —
    not a proof — so the enclosure is flagged non-rigorous and must only be
    used in heuristic mode.
    """
    prec = _check_budget("prec", prec, 1)
    # aim a few digits past prec so the estimate lands strictly inside the
    # rigorous enclosure whenever one exists at the same working precision
    n = int(1.31 * (prec + 4)) + 3
    bits = bits_for_digits(prec + 5)
    with gmpy2.context(precision=bits):
        d = (3 + gmpy2.sqrt(mpfr(8))) ** n
        d = (d + 1 / d) / 2
        b = mpfr(-1)
        c = -d
        acc = mpfr(0)
        for k in range(n):
            c = b - c
            a = term(k)
            acc = acc + c * mpq(a.numerator, a.denominator)
            b = b * (k + n) * (k - n) / ((k + mpfr("0.5")) * (k + 1))
        est = acc / d
        err = abs(est) / (d / 2) + mpfr(2) ** (-bits + 8)
    point = BallReal.from_endpoints(est, est, prec)
    ball = widened(point, err)
    return Enclosure(
        ball=ball,
        tail=None,
        terms_used=n,
        rigorous=False,
        note="accelerated alternating sum: radius is an estimate, not a bound",
    )


# --- shared helpers --------------------------------------------------------------


def _prime_density(P: int) -> float:
    """Approximate primes-below-P per unit limit, for routing cost estimates."""
    return 1.0 / max(math.log(max(P, 3)) - 1.0, 1.0)


def _cap_note(
    ball: BallReal, prec: int, n_used: int, n_target: int, cap: int, cap_name: str
) -> tuple[bool, str]:
    """Detect and describe a budget-bound enclosure (wider than requested)."""
    rad = ball.rad
    if rad == 0:
        return False, ""
    achieved = int(-gmpy2.log10(rad)) if rad < 1 else 0
    if achieved >= prec:
        return False, ""
    if n_used >= cap and n_target > cap:
        return True, (
            f"{cap_name}={cap} caps the certified tail at about {achieved} digits "
            f"(target {prec})"
        )
    return True, (
        f"rounding/tail floor limits the enclosure to about {achieved} digits "
        f"(target {prec})"
    )
