"""Verdict engine: evaluation, ladder classification, reports, invariants."""

import json
import random
from fractions import Fraction

import pytest
from gmpy2 import mpfr

from identicheck import dsl, mpball
from identicheck.dsl import Corpus, parse_corpus, parse_expr
from identicheck.engine import EvalBudget, Verdict, _digits_from_bound, evaluate, run, verdict


def one_identity(src):
    return next(iter(parse_corpus(src)))


class TestEvalBudget:
    def test_defaults(self):
        b = EvalBudget()
        assert (b.digits, b.max_terms, b.prime_limit, b.mode) == (30, 10**7, 10**6, "rigorous")

    def test_validation(self):
        for kwargs in (dict(digits=3), dict(digits=30.5), dict(max_terms=0),
                       dict(prime_limit=0), dict(mode="fast")):
            with pytest.raises(ValueError):
                EvalBudget(**kwargs)


class TestEvaluate:
    B = EvalBudget(digits=15)

    def check(self, source, exact, env=None):
        ball = evaluate(parse_expr(source), env or {}, self.B)
        assert ball.contains(exact), f"{source} !∋ {exact}"
        return ball

    def test_arithmetic(self):
        self.check("1 + 2 * 3", 7)
        self.check("(1 + 2) * 3", 9)
        self.check("7 / 2", Fraction(7, 2))
        self.check("-(3 - 5)", 2)

    def test_powers(self):
        self.check("2^10", 1024)
        self.check("2^-3", Fraction(1, 8))
        self.check("(1 / 3)^2", Fraction(1, 9))

    def test_factorial_euler_bernoulli_chi4(self):
        self.check("8!", 40320)
        self.check("euler(8)", 1385)
        self.check("abs(euler(6))", 61)
        self.check("bernoulli_hist(5)", Fraction(5, 66))
        self.check("chi4(n)", 1, env={"n": 13})
        self.check("chi4(n)", -1, env={"n": 7})

    def test_finite_sum_prod(self):
        self.check("sum(k, 1..10, k)", 55)
        self.check("prod(k, 1..5, k)", 120)
        self.check("sum(k, 0..3, 2^k)", 15)
        self.check("sum(k, 1..3, prod(t, 1..4, t + k))", 120 + 360 + 840)

    def test_parameterized(self):
        self.check("2*n + 1", 7, env={"n": 3})
        self.check("sum(k, 1..5, k^n)", 55, env={"n": 2})

    def test_pi_sqrt_cosh(self):
        ball = evaluate(parse_expr("cosh(0 - 0)"), {}, self.B)
        assert ball.contains(1)
        pi_ball = evaluate(parse_expr("pi"), {}, self.B)
        assert mpball.intersects(pi_ball, mpball.const_pi(15))

    def test_recognized_series(self):
        # beta(3) series routes to the certified evaluator
        ball = evaluate(parse_expr("sum(k, 0..inf, (-1)^k / (2*k + 1)^3)"), {}, self.B)
        oracle = mpball.const_pi(40).int_pow(3) / 32
        assert mpball.intersects(ball, oracle)
        assert float(ball.rad) < 1e-15

    def test_recognized_series_with_param_exponent(self):
        ball = evaluate(parse_expr("sum(k, 0..inf, (-1)^k / (2*k + 1)^(2*n + 1))"),
                        {"n": 1}, self.B)
        oracle = mpball.const_pi(40).int_pow(3) / 32
        assert mpball.intersects(ball, oracle)

    def test_recognized_zeta_series(self):
        ball = evaluate(parse_expr("sum(k, 1..inf, 1 / k^2)"), {}, self.B)
        oracle = mpball.const_pi(40).int_pow(2) / 6
        assert mpball.intersects(ball, oracle)

    def test_recognized_odd_product(self):
        ball = evaluate(parse_expr("prod(k, 1..inf, 1 - (-1)^k / (2*k + 1))"), {}, self.B)
        oracle = (mpball.const_pi(40) * mpball.sqrt(mpball.BallReal.from_int(2, 40))) / 4
        assert mpball.intersects(ball, oracle)

    def test_recognized_prime_products(self):
        beta3 = mpball.const_pi(40).int_pow(3) / 32
        direct = evaluate(parse_expr("prod(p, odd_primes, p^3 / (p^3 - chi4(p)))"), {}, self.B)
        assert mpball.intersects(direct, beta3)
        recip = evaluate(parse_expr("prod(p, odd_primes, 1 - chi4(p) / p^3)"), {}, self.B)
        assert mpball.intersects(recip * direct, mpball.BallReal.from_int(1, 15))
        odd_zeta = evaluate(parse_expr("prod(p, odd_primes, 1 - 1 / p^2)"), {}, self.B)
        # prod over odd p of (1 - p^-2) = 1/zeta(2) / (1 - 1/4) = 8 / pi^2
        oracle = mpball.BallReal.from_int(8, 40) / mpball.const_pi(40).int_pow(2)
        assert mpball.intersects(odd_zeta, oracle)

    def test_unbound_variable(self):
        with pytest.raises(ValueError):
            evaluate(parse_expr("2*n + 1"), {}, self.B)

    def test_unrecognized_infinite_shape_rigorous(self):
        with pytest.raises(ValueError) as info:
            evaluate(parse_expr("sum(k, 1..inf, 1 / (k * (k + 1)))"), {}, self.B)
        assert "heuristic" in str(info.value)

    def test_non_integer_exponent_rejected(self):
        with pytest.raises(ValueError):
            evaluate(parse_expr("2^pi"), {}, self.B)


class TestVerdicts:
    def test_refuted_simple(self):
        item = one_identity('identity "x" { lhs = pi; rhs = 3; expect = false; }')
        v = verdict(item, None, EvalBudget(digits=8))
        assert v.kind == "refuted"
        assert 0.14 < float(v.gap) < 0.15

    def test_confirmed_simple(self):
        item = one_identity(
            'identity "x" { lhs = sqrt(2) * sqrt(2); rhs = 2; expect = true >= 10 digits; }')
        v = verdict(item, None, EvalBudget(digits=12))
        assert v.kind == "confirmed"
        assert v.digits_matched >= 10

    def test_confirmed_requires_identity_digits(self):
        # ladder escalates beyond budget.digits to reach the identity's bar
        item = one_identity(
            'identity "x" { lhs = sum(k, 0..inf, (-1)^k / (2*k + 1)^9);'
            ' rhs = 1385 * pi^9 / (8! * 2^10); expect = true >= 30 digits; }')
        v = verdict(item, None, EvalBudget(digits=8))
        assert v.kind == "confirmed"
        assert v.digits_matched >= 30

    def test_inconclusive_names_binding_cap(self):
        item = one_identity(
            'identity "x" { lhs = prod(p, odd_primes, p^3 / (p^3 - chi4(p)));'
            ' rhs = pi^3 / 32; expect = true >= 10 digits; }')
        v = verdict(item, None, EvalBudget(digits=10, prime_limit=100))
        assert v.kind == "inconclusive"
        assert "prime_limit=100" in v.reason

    def test_param_range_enforced(self):
        item = one_identity(
            'identity "x" { lhs = n; rhs = n; param n in 1..3; expect = true; }')
        with pytest.raises(ValueError):
            verdict(item, 7, EvalBudget(digits=6))
        with pytest.raises(ValueError):
            verdict(item, None, EvalBudget(digits=6))

    def test_refuted_sound_at_double_precision(self):
        corpus = dsl.builtin_corpus()
        for ident, param in (("eq2", 0), ("eq2", 3), ("eq3", 1), ("eq11_as_printed", None)):
            item = corpus.get(ident)
            first = verdict(item, param, EvalBudget(digits=8))
            second = verdict(item, param, EvalBudget(digits=16))
            assert first.kind == "refuted", (ident, param)
            assert second.kind == "refuted", (ident, param)
            # with tighter enclosures the certified gap can only grow
            assert float(second.gap) >= float(first.gap) * 0.999

    def test_confirmed_monotone_in_digits(self):
        item = dsl.builtin_corpus().get("eq6")
        low = verdict(item, 2, EvalBudget(digits=10))
        high = verdict(item, 2, EvalBudget(digits=20))
        assert low.kind == high.kind == "confirmed"
        assert high.digits_matched >= low.digits_matched

    def test_verdict_str(self):
        assert str(Verdict.confirmed(12)) == "Confirmed(12)"
        assert str(Verdict.refuted(mpfr("0.25"))).startswith("Refuted(2.500")
        assert str(Verdict.inconclusive("because")) == "Inconclusive(because)"


class TestDigitsFromBound:
    def test_powers_of_two(self):
        # 2^-40 = 9.09e-13: <= 1e-12 but not <= 1e-13
        assert _digits_from_bound(mpfr(2) ** -40, 100) == 12

    def test_zero_saturates(self):
        assert _digits_from_bound(mpfr(0), 77) == 77

    def test_above_one(self):
        assert _digits_from_bound(mpfr(2), 100) == 0

    def test_exact_tenth(self):
        assert _digits_from_bound(mpfr("0.125"), 100) == 0  # 1/8 > 1e-1
        assert _digits_from_bound(mpfr("0.09375"), 100) == 1  # 3/32 <= 1e-1


class TestHeuristicMode:
    def test_telescoping_sum(self):
        item = one_identity(
            'identity "t" { lhs = sum(k, 1..inf, 1 / (k * (k + 1)));'
            ' rhs = 1; expect = true >= 3 digits; }')
        v = verdict(item, None, EvalBudget(digits=4, mode="heuristic"))
        assert v.kind == "confirmed"
        assert v.digits_matched >= 3

    def test_heuristic_inside_rigorous(self):
        expr = parse_expr("sum(k, 0..inf, (-1)^k / (2*k + 1)^5)")
        rigorous = evaluate(expr, {}, EvalBudget(digits=25))
        fast = evaluate(expr, {}, EvalBudget(digits=25, mode="heuristic"))
        assert rigorous.contains(fast.mid)

    def test_geometric_sum_prod(self):
        # prod (1 + 1/2^k) over k >= 1 converges fast; compare two heuristic runs
        item = one_identity(
            'identity "g" { lhs = prod(k, 1..inf, 1 + 1 / 2^k) - prod(k, 1..inf, 1 + 1 / 2^k);'
            ' rhs = 0; expect = true >= 6 digits; }')
        v = verdict(item, None, EvalBudget(digits=8, mode="heuristic"))
        assert v.kind == "confirmed"


@pytest.fixture(scope="module")
def small_corpus():
    return parse_corpus('''
        identity "good" {
          lhs = sum(k, 0..inf, (-1)^k / (2*k + 1)^(2*n + 1));
          rhs = abs(euler(2*n)) * (pi / 2)^(2*n + 1) / (2 * (2*n)!);
          param n in 1..2;
          expect = true >= 10 digits;
        }

        identity "bad" {
          lhs = pi;
          rhs = 22 / 7;
          expect = false;
        }
        ''')


class TestRun:
    def test_record_order_and_summary(self, small_corpus):
        report = run(small_corpus, EvalBudget(digits=12), corpus_path="mini.idn")
        assert [(r.ident, r.param) for r in report.records] == \
            [("good", 1), ("good", 2), ("bad", None)]
        assert report.matched == 3
        assert report.mismatched == 0 and report.inconclusive == 0

    def test_json_key_contract(self, small_corpus):
        report = run(small_corpus, EvalBudget(digits=12), corpus_path="mini.idn")
        doc = report.to_json_dict()
        assert sorted(doc) == ["corpus", "digits_requested", "mode", "results", "summary"]
        assert doc["corpus"] == "mini.idn"
        assert doc["digits_requested"] == 12
        assert doc["mode"] == "rigorous"
        assert doc["summary"] == {"matched": 3, "mismatched": 0, "inconclusive": 0}
        for entry in doc["results"]:
            assert sorted(entry) == ["digits_matched", "gap", "id", "lhs", "param",
                                     "prime_limit", "rhs", "terms_used", "verdict"]
            assert sorted(entry["lhs"]) == ["mid", "rad"]
        refuted = doc["results"][-1]
        assert refuted["verdict"] == "refuted"
        assert float(refuted["gap"]) > 1e-4  # 22/7 - pi ~ 1.26e-3
        assert refuted["digits_matched"] is None

    def test_timings_key_optional(self, small_corpus):
        budget = EvalBudget(digits=12)
        plain = run(small_corpus, budget).to_json_dict()
        timed = run(small_corpus, budget, timings=True).to_json_dict()
        assert all("ms" not in entry for entry in plain["results"])
        assert all(entry["ms"] >= 0 for entry in timed["results"])

    def test_byte_identical_without_timings(self, small_corpus):
        budget = EvalBudget(digits=12)
        a = run(small_corpus, budget, corpus_path="mini.idn").to_json()
        b = run(small_corpus, budget, corpus_path="mini.idn").to_json()
        assert a == b
        json.loads(a)  # well-formed

    def test_reorder_invariance(self, small_corpus):
        budget = EvalBudget(digits=12)
        forward = run(small_corpus, budget)
        reversed_corpus = Corpus(tuple(reversed(tuple(small_corpus))))
        backward = run(reversed_corpus, budget)
        fwd = {(r.ident, r.param): (str(r.verdict), r.lhs_mid, r.rhs_mid)
               for r in forward.records}
        bwd = {(r.ident, r.param): (str(r.verdict), r.lhs_mid, r.rhs_mid)
               for r in backward.records}
        assert fwd == bwd

    def test_only_filter(self, small_corpus):
        report = run(small_corpus, EvalBudget(digits=12), only="bad")
        assert len(report.records) == 1
        with pytest.raises(KeyError):
            run(small_corpus, EvalBudget(digits=12), only="nope")

    def test_text_report_shape(self, small_corpus):
        report = run(small_corpus, EvalBudget(digits=12), corpus_path="mini.idn")
        text = report.to_text()
        assert "mini.idn" in text.splitlines()[0]
        assert "summary: 3 matched, 0 mismatched, 0 inconclusive" in text
        assert "Refuted" in text and "Confirmed" in text

    def test_mismatch_and_inconclusive_counting(self):
        corpus = parse_corpus('''
        identity "lie" { lhs = pi; rhs = 3; expect = true >= 6 digits; }
        identity "stuck" { lhs = sum(k, 1..inf, 1 / (k * (k + 1))); rhs = 1; expect = true; }
        ''')
        report = run(corpus, EvalBudget(digits=6))
        by_id = {r.ident: r for r in report.records}
        assert by_id["lie"].matched is False
        assert by_id["stuck"].matched is None
        assert report.mismatched == 1 and report.inconclusive == 1
