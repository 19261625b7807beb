"""End-to-end acceptance checks with pinned tolerances and runtime budgets.

Each test drives the shipped corpus (or the public API) the way a release
gate would: fixed budgets, explicit digit bars, and wall-clock ceilings.
Oracle constants are pinned as decimal strings that were cross-checked by
independent evaluation routes (gamma closed forms, direct tail-bounded
products, and raw 300-bit directed arithmetic); truncated decimals are
compared through widened oracle balls, never by exact containment.
"""

import json
import math
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
from gmpy2 import mpfr, mpq

from identicheck import analytic, dsl, exactseq, mpball
from identicheck.engine import EvalBudget, evaluate, run, verdict
from identicheck.mpball import BallReal

CORPUS = dsl.builtin_corpus()

# P(3) = prod_{k>=1} (1 - (-1)^k/(2k+1)^3) = pi/12 + (pi*sqrt(2)/12)*cosh(pi*sqrt(3)/4)
P3_ORACLE = Fraction("1.030811781713806444562118984642065875178")


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def oracle_ball(value, prec, slack):
    """A ball around a pinned decimal, widened by its truncation slack."""
    return mpball.widened(BallReal.from_fraction(Fraction(value), prec), mpfr(slack))


def cli(*args):
    return subprocess.run([sys.executable, "-m", "identicheck.cli", *args],
                          capture_output=True, text=True)


def test_constant_tables_exact_strings():
    with within(1.0):
        euler = cli("constants", "--euler", "8")
        bern = cli("constants", "--bernoulli", "5")
    assert euler.returncode == 0
    assert euler.stdout == "E_0 = 1\nE_2 = -1\nE_4 = 5\nE_6 = -61\nE_8 = 1385\n"
    assert bern.returncode == 0
    assert bern.stdout == "B_1 = 1/6\nB_2 = 1/30\nB_3 = 1/42\nB_4 = 1/30\nB_5 = 5/66\n"


def test_beta9_series_vs_closed_form_thirty_digits():
    with within(5.0):
        v = verdict(CORPUS.get("eq7"), None, EvalBudget(digits=30))
    assert v.kind == "confirmed"
    assert v.digits_matched >= 30


def test_odd_integer_product_refuted_all_orders():
    with within(30.0):
        gaps = {}
        for n in range(0, 4):
            v = verdict(CORPUS.get("eq2"), n, EvalBudget(digits=10))
            assert v.kind == "refuted", f"n={n}: {v}"
            gaps[n] = float(v.gap)
    assert gaps[0] >= 0.3
    assert all(g > 0 for g in gaps.values())


def test_misplaced_prime_product_refuted():
    with within(30.0):
        v = verdict(CORPUS.get("eq3"), 1, EvalBudget(digits=10))
    assert v.kind == "refuted"
    assert float(v.gap) >= 0.05


def test_euler_number_prime_product_digit_bars():
    with within(60.0):
        v1 = verdict(CORPUS.get("eq4_primes"), 1,
                     EvalBudget(digits=10, prime_limit=2 * 10**6))
        v3 = verdict(CORPUS.get("eq4_primes"), 3,
                     EvalBudget(digits=20, prime_limit=10**4))
    assert v1.kind == "confirmed" and v1.digits_matched >= 10
    assert v3.kind == "confirmed" and v3.digits_matched >= 20


@pytest.mark.xfail(
    strict=True,
    reason="a prime cutoff of 10^4 leaves a certified tail near 5e-17 for the"
           " s=5 product, so at most ~16 digits are certifiable and the"
           " 20-digit bar is unreachable at this cutoff; the companion test"
           " below pins the honest capped outcome")
def test_euler_number_prime_product_m2_twenty_digits():
    with within(60.0):
        v = verdict(CORPUS.get("eq4_primes"), 2,
                    EvalBudget(digits=20, prime_limit=10**4))
    assert v.kind == "confirmed"
    assert v.digits_matched >= 20


def test_euler_number_prime_product_m2_capped_outcome():
    with within(60.0):
        report = run(CORPUS, EvalBudget(digits=20, prime_limit=10**4),
                     only="eq4_primes")
    rec = {r.param: r for r in report.records}[2]
    assert rec.verdict.kind == "confirmed"
    assert 14 <= rec.verdict.digits_matched < 20
    assert "prime_limit=10000 caps the certified tail" in rec.note


def test_bernoulli_product_and_series_with_reported_caps():
    with within(120.0):
        prod_report = run(CORPUS, EvalBudget(digits=20, prime_limit=10**7),
                          only="eq8")
        series_report = run(CORPUS, EvalBudget(digits=20, max_terms=10**6),
                            only="eq9")
    prod = {r.param: r for r in prod_report.records}
    series = {r.param: r for r in series_report.records}

    # m = 1 is the slowly-converging s = 2 case: confirmed, never failed,
    # and the binding budget is named in the record.
    for recs, cap_text in ((prod, "prime_limit=10000000"),
                           (series, "max_terms=1000000")):
        rec = recs[1]
        assert rec.verdict.kind == "confirmed"
        assert rec.verdict.digits_matched >= 6
        assert cap_text in rec.note and "caps the certified tail" in rec.note

    for m in range(2, 5):
        assert prod[m].verdict.kind == "confirmed"
        assert prod[m].verdict.digits_matched >= 12, f"eq8 m={m}"
    for m in range(2, 6):
        assert series[m].verdict.kind == "confirmed"
        assert series[m].verdict.digits_matched >= 12, f"eq9 m={m}"


def test_s1_product_direct_and_gamma_closed_form():
    with within(60.0):
        report = run(CORPUS, EvalBudget(digits=8, max_terms=10**7), only="eq10")
        rec = report.records[0]
        assert rec.verdict.kind == "confirmed"
        assert rec.verdict.digits_matched >= 8
        assert rec.terms_used <= 10**7

        # Gamma(5/4)*Gamma(3/4) against pi*sqrt(2)/4 to at least 50 digits.
        g = mpball.gamma(BallReal.from_fraction(Fraction(5, 4), 60)) \
            * mpball.gamma(BallReal.from_fraction(Fraction(3, 4), 60))
        closed = mpball.const_pi(60) * mpball.sqrt(BallReal.from_int(2, 60)) / 4
        assert mpball.intersects(g, closed)
        assert float(mpball.midpoint_distance_upper(g, closed)) < 1e-50
        assert float(g.rad) < 1e-50 and float(closed.rad) < 1e-50


def test_gamma_closed_forms_match_direct_products():
    with within(60.0):
        p3_ball = oracle_ball(P3_ORACLE, 40, "1e-35")
        for s in range(1, 9):
            closed = analytic.odd_product_closed(s, 12)
            direct = analytic.odd_product_direct(s, 12)
            assert mpball.intersects(closed.ball, direct.ball), f"s={s}"
            assert float(closed.ball.rad) <= 1e-8, f"s={s}"
            assert float(direct.ball.rad) <= 1e-8, f"s={s}"
            dist = mpball.midpoint_distance_upper(closed.ball, direct.ball)
            assert float(dist) <= 2e-8, f"s={s}"
            if s == 3:
                assert mpball.intersects(closed.ball, p3_ball)
                assert mpball.intersects(direct.ball, p3_ball)
                # The 8-figure rounding of P(3) is 1.0308118; the decimal
                # 1.0308121 is provably more than 1e-7 away from the product.
                stray = BallReal.from_fraction(Fraction("1.0308121"), 12)
                assert float(mpball.certified_gap(closed.ball, stray)) > 1e-7


def test_s3_closed_form_adjudication():
    with within(10.0):
        item = CORPUS.get("eq11_as_printed")
        budget = EvalBudget(digits=20)

        lhs = evaluate(item.lhs, {}, budget)
        assert mpball.intersects(lhs, oracle_ball(P3_ORACLE, 40, "1e-18"))

        # The right side as printed evaluates inside 0.8848892 +/- 1e-6.
        rhs = evaluate(item.rhs, {}, budget)
        err = abs(mpq(rhs.mid) - mpq(8848892, 10**7)) + mpq(rhs.rad)
        assert err <= mpq(1, 10**6)

        variant = verdict(CORPUS.get("eq11_sqrt3_variant"), None,
                          EvalBudget(digits=12))
        assert variant.kind == "confirmed"
        assert variant.digits_matched >= 10

        # The shipped expectation for the printed form must match the engine.
        report = run(CORPUS, budget, only="eq11_as_printed")
        assert report.records[0].verdict.kind == "refuted"
        assert report.records[0].matched is True


def test_property_suites():
    with within(120.0):
        _property_ball_containment()
        _property_euler_recurrence()
        _property_triple_intersections()
        _property_dsl_round_trip()
        _property_engine_determinism()


def _property_ball_containment():
    import random
    rng = random.Random(20260815)

    def fraction():
        num = rng.randint(-10**6, 10**6)
        den = rng.randint(1, 10**6)
        return Fraction(num, den)

    violations = 0
    for _ in range(1000):
        a, b = fraction(), fraction()
        x = BallReal.from_fraction(a, 15)
        y = BallReal.from_fraction(b, 15)
        op = rng.choice("+-*/")
        if op == "+":
            got, exact = x + y, a + b
        elif op == "-":
            got, exact = x - y, a - b
        elif op == "*":
            got, exact = x * y, a * b
        else:
            if b == 0:
                continue
            got, exact = x / y, a / b
        if not got.contains(exact):
            violations += 1
    assert violations == 0


def _property_euler_recurrence():
    # sum_{j=0}^{m} C(2m, 2j) E_{2j} = 0 for every m >= 1.
    table = exactseq.euler_numbers(50)
    assert table[0] == 1
    for m in range(1, len(table)):
        acc = sum(math.comb(2 * m, 2 * j) * table[j] for j in range(m + 1))
        assert acc == 0, f"m={m}"
    for n in range(1, 51, 2):
        assert exactseq.euler_number(n) == 0


def _property_triple_intersections():
    for s in (3, 5, 7, 9):
        series = analytic.beta_series(s, 25).ball
        product = analytic.beta_euler_product(s, 25).ball
        closed = analytic.beta_closed(s, 25).ball
        assert mpball.intersects(series, product), f"beta s={s}"
        assert mpball.intersects(series, closed), f"beta s={s}"
        assert mpball.intersects(product, closed), f"beta s={s}"
    for two_m in (2, 4, 6, 8, 10):
        series = analytic.zeta_even_series(two_m, 25).ball
        product = analytic.zeta_euler_product(two_m, 25).ball
        closed = analytic.zeta_closed_even(two_m, 25).ball
        assert mpball.intersects(series, product), f"zeta s={two_m}"
        assert mpball.intersects(series, closed), f"zeta s={two_m}"
        assert mpball.intersects(product, closed), f"zeta s={two_m}"


def _property_dsl_round_trip():
    import random
    import test_dsl
    gen = test_dsl._Gen(random.Random(99173))
    for _ in range(200):
        corpus = gen.corpus()
        text = dsl.print_corpus(corpus)
        again = dsl.parse_corpus(text)
        assert again == corpus
        assert dsl.print_corpus(again) == text


def _property_engine_determinism():
    budget = EvalBudget(digits=12)
    first = run(CORPUS, budget, corpus_path="corpus.idn").to_json()
    second = run(CORPUS, budget, corpus_path="corpus.idn").to_json()
    assert first == second
    json.loads(first)
