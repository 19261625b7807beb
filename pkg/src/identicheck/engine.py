"""Verdict engine: evaluates identity sides and classifies the comparison.

For each (identity, parameter) pair the engine evaluates both sides as
certified enclosures on a precision ladder (1x, 2x, 4x the requested
digits), then returns:

* ``Refuted(gap)`` as soon as the enclosures are certifiably disjoint — the
  gap is a lower bound on the true separation;
* ``Confirmed(d)`` when the enclosures overlap and both radii and the
  midpoint distance are at most 10^-d, with d at least the identity's
  required digits;
* ``Inconclusive(reason)`` when the budget caps the certified digits below
  the requirement — the reason names the binding constraint rather than
  escalating forever.

Infinite sums/products are routed to the bounded evaluators in
``identicheck.analytic`` when their body matches a recognized shape
(syntactic match on the canonical forms):

=====================================================  ==========================
``sum(k, 0..inf, (-1)^k / (2*k + 1)^s)``               alternating beta series
``sum(k, 1..inf, 1 / k^s)`` (s even)                   zeta series
``prod(k, 1..inf, 1 - (-1)^k / (2*k + 1)[^s])``        paired odd-integer product
``prod(p, odd_primes, p^s / (p^s - chi4(p)))``         beta Euler product
``prod(p, odd_primes, 1 - chi4(p) / p^s)``             reciprocal beta product
``prod(p, odd_primes, 1 - 1 / p^s)``                   odd part of 1/zeta product
=====================================================  ==========================

Anything else under an infinite domain is an error in rigorous mode (mapped
to ``Inconclusive``); in heuristic mode it is estimated by truncation
doubling until the printed digits stabilize, and the result is flagged
non-rigorous (its radius is an estimate, not a bound).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import gmpy2
from gmpy2 import mpfr, mpq

from . import analytic, exactseq, mpball
from .dsl import (
    Abs, Add, BernoulliHist, BigProd, BigSum, Chi4, Corpus, Cosh, Div, EulerNum,
    Factorial, FiniteRange, Identity, InfiniteIntegers, IntLit, Mul, Neg, OddPrimes,
    Pi, Pow, RatLit, Sqrt, Sub, Var,
)
from .mpball import BallError, BallReal

__all__ = ["EngineError", "EvalBudget", "Report", "Verdict", "evaluate", "run", "verdict"]


class EngineError(ValueError):
    """Evaluation cannot proceed; the message becomes an Inconclusive reason."""


@dataclass(frozen=True)
class EvalBudget:
    """Evaluation limits: target digits plus truncation caps."""

    digits: int = 30
    max_terms: int = 10**7
    prime_limit: int = 10**6
    mode: str = "rigorous"

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < 4:
            raise ValueError(f"digits must be an integer >= 4, got {self.digits!r}")
        if not isinstance(self.max_terms, int) or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not isinstance(self.prime_limit, int) or self.prime_limit < 1:
            raise ValueError(f"prime_limit must be a positive integer, got {self.prime_limit!r}")
        if self.mode not in ("rigorous", "heuristic"):
            raise ValueError(f"mode must be 'rigorous' or 'heuristic', got {self.mode!r}")


@dataclass(frozen=True)
class Verdict:
    """Confirmed(digits_matched) | Refuted(gap) | Inconclusive(reason)."""

    kind: str  # "confirmed" | "refuted" | "inconclusive"
    digits_matched: Optional[int] = None
    gap: Optional[mpfr] = None  # certified lower bound on the separation
    reason: Optional[str] = None

    @classmethod
    def confirmed(cls, digits_matched: int) -> "Verdict":
        return cls("confirmed", digits_matched=digits_matched)

    @classmethod
    def refuted(cls, gap: mpfr) -> "Verdict":
        return cls("refuted", gap=gap)

    @classmethod
    def inconclusive(cls, reason: str) -> "Verdict":
        return cls("inconclusive", reason=reason)

    def __str__(self):
        if self.kind == "confirmed":
            return f"Confirmed({self.digits_matched})"
        if self.kind == "refuted":
            return f"Refuted({mpball._decimal_str(self.gap, 4)})"
        return f"Inconclusive({self.reason})"


# --- expression evaluation ---------------------------------------------------------


@dataclass
class _Meta:
    """Side-channel facts gathered while evaluating one expression tree."""

    terms_used: int = 0
    prime_limit_used: Optional[int] = None
    budget_capped: bool = False  # a user cap (max_terms/prime_limit) bound the tail
    floor_capped: bool = False  # a rounding/tail floor bound it instead
    rigorous: bool = True
    notes: list = field(default_factory=list)

    def absorb(self, enc: analytic.Enclosure):
        self.terms_used = max(self.terms_used, enc.terms_used)
        if enc.prime_limit_used is not None:
            pl = self.prime_limit_used or 0
            self.prime_limit_used = max(pl, enc.prime_limit_used)
        if enc.capped:
            if "caps the certified tail" in enc.note:
                self.budget_capped = True
            else:
                self.floor_capped = True
            if enc.note:
                self.notes.append(enc.note)
        if not enc.rigorous:
            self.rigorous = False
            if enc.note:
                self.notes.append(enc.note)


def evaluate(expr, env: dict, budget: EvalBudget) -> BallReal:
    """Enclosure of ``expr`` with ``env`` binding the declared parameter."""
    ball, _ = _evaluate(expr, dict(env), budget, budget.digits, _Meta())
    return ball


def _evaluate(expr, env, budget, prec, meta) -> tuple[BallReal, _Meta]:
    ball = _eval(expr, env, budget, prec, meta)
    return ball, meta


def _eval(expr, env, budget, prec, meta) -> BallReal:
    if isinstance(expr, IntLit):
        return BallReal.from_int(expr.value, prec)
    if isinstance(expr, RatLit):
        return BallReal.from_fraction(expr.value, prec)
    if isinstance(expr, Pi):
        return mpball.const_pi(prec)
    if isinstance(expr, Var):
        try:
            return BallReal.from_int(env[expr.name], prec)
        except KeyError:
            raise EngineError(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, Neg):
        return -_eval(expr.operand, env, budget, prec, meta)
    if isinstance(expr, Add):
        return _eval(expr.left, env, budget, prec, meta) + _eval(expr.right, env, budget, prec, meta)
    if isinstance(expr, Sub):
        return _eval(expr.left, env, budget, prec, meta) - _eval(expr.right, env, budget, prec, meta)
    if isinstance(expr, Mul):
        return _eval(expr.left, env, budget, prec, meta) * _eval(expr.right, env, budget, prec, meta)
    if isinstance(expr, Div):
        return _eval(expr.left, env, budget, prec, meta) / _eval(expr.right, env, budget, prec, meta)
    if isinstance(expr, Pow):
        base = _eval(expr.base, env, budget, prec, meta)
        exponent = _int_eval(expr.exponent, env, "exponent")
        return base.int_pow(exponent)
    if isinstance(expr, Factorial):
        n = _int_eval(expr.operand, env, "'!'")
        if n < 0:
            raise EngineError(f"factorial of negative integer {n}")
        return BallReal.from_int(exactseq.factorial(n), prec)
    if isinstance(expr, Abs):
        return abs(_eval(expr.operand, env, budget, prec, meta))
    if isinstance(expr, Sqrt):
        return mpball.sqrt(_eval(expr.operand, env, budget, prec, meta))
    if isinstance(expr, Cosh):
        return mpball.cosh(_eval(expr.operand, env, budget, prec, meta))
    if isinstance(expr, EulerNum):
        n = _int_eval(expr.operand, env, "euler")
        if n < 0:
            raise EngineError(f"euler index must be >= 0, got {n}")
        return BallReal.from_int(exactseq.euler_number(n), prec)
    if isinstance(expr, BernoulliHist):
        m = _int_eval(expr.operand, env, "bernoulli_hist")
        if m < 1:
            raise EngineError(f"bernoulli_hist index must be >= 1, got {m}")
        return BallReal.from_fraction(exactseq.bernoulli_hist(m), prec)
    if isinstance(expr, Chi4):
        p = _int_eval(expr.operand, env, "chi4")
        return BallReal.from_int(exactseq.chi4(p), prec)
    if isinstance(expr, (BigSum, BigProd)):
        return _eval_bigop(expr, env, budget, prec, meta)
    raise EngineError(f"cannot evaluate node {type(expr).__name__}")


def _int_eval(expr, env, context: str) -> int:
    """Exact integer value of an integer-valued expression (validated shapes)."""
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise EngineError(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, Neg):
        return -_int_eval(expr.operand, env, context)
    if isinstance(expr, Add):
        return _int_eval(expr.left, env, context) + _int_eval(expr.right, env, context)
    if isinstance(expr, Sub):
        return _int_eval(expr.left, env, context) - _int_eval(expr.right, env, context)
    if isinstance(expr, Mul):
        return _int_eval(expr.left, env, context) * _int_eval(expr.right, env, context)
    if isinstance(expr, Pow):
        base = _int_eval(expr.base, env, context)
        exponent = _int_eval(expr.exponent, env, context)
        if exponent < 0:
            raise EngineError(f"negative exponent {exponent} is not integer-valued")
        return base**exponent
    if isinstance(expr, Factorial):
        n = _int_eval(expr.operand, env, context)
        if n < 0:
            raise EngineError(f"factorial of negative integer {n}")
        return exactseq.factorial(n)
    if isinstance(expr, Abs):
        return abs(_int_eval(expr.operand, env, context))
    if isinstance(expr, EulerNum):
        return exactseq.euler_number(_int_eval(expr.operand, env, context))
    raise EngineError(
        f"{context} requires an integer-valued expression, found {type(expr).__name__}"
    )


# --- infinite-shape recognition ---


def _is_minus_one(node) -> bool:
    return isinstance(node, Neg) and isinstance(node.operand, IntLit) and node.operand.value == 1


def _is_alt_sign(node, var: str) -> bool:
    """(-1)^var"""
    return (
        isinstance(node, Pow)
        and _is_minus_one(node.base)
        and isinstance(node.exponent, Var)
        and node.exponent.name == var
    )


def _is_two_k_plus_one(node, var: str) -> bool:
    """2*var + 1 (either factor order)."""
    if not (isinstance(node, Add) and isinstance(node.right, IntLit) and node.right.value == 1):
        return False
    m = node.left
    if not isinstance(m, Mul):
        return False
    a, b = m.left, m.right
    return (
        isinstance(a, IntLit) and a.value == 2 and isinstance(b, Var) and b.name == var
    ) or (
        isinstance(b, IntLit) and b.value == 2 and isinstance(a, Var) and a.name == var
    )


def _split_pow(node) -> tuple:
    """(base, exponent expression or None if the power is implicit 1)."""
    if isinstance(node, Pow):
        return node.base, node.exponent
    return node, None


def _shape_exponent(exp_expr, env) -> int:
    s = 1 if exp_expr is None else _int_eval(exp_expr, env, "exponent")
    if s < 1:
        raise EngineError(f"series/product exponent must be >= 1, got {s}")
    return s


def _eval_bigop(node, env, budget, prec, meta) -> BallReal:
    domain = node.domain
    if isinstance(domain, FiniteRange):
        acc = None
        for value in range(domain.lo, domain.hi + 1):
            inner = dict(env)
            inner[node.var] = value
            term = _eval(node.body, inner, budget, prec, meta)
            if acc is None:
                acc = term
            elif isinstance(node, BigSum):
                acc = acc + term
            else:
                acc = acc * term
        return acc  # ranges are validated non-empty

    matched = _match_infinite(node, env, budget, prec)
    if matched is not None:
        enclosure = matched()
        meta.absorb(enclosure)
        return enclosure.ball

    if budget.mode != "heuristic":
        raise EngineError(
            "no certified tail bound for this infinite "
            f"{'sum' if isinstance(node, BigSum) else 'product'} shape; "
            "re-run in heuristic mode for a non-rigorous estimate"
        )
    return _heuristic_bigop(node, env, budget, prec, meta)


def _match_infinite(node, env, budget, prec):
    """Return a thunk producing an Enclosure for recognized shapes, else None."""
    body = node.body
    domain = node.domain

    if isinstance(node, BigSum) and isinstance(domain, InfiniteIntegers):
        if domain.start == 0 and isinstance(body, Div) and _is_alt_sign(body.left, node.var):
            base, exp_expr = _split_pow(body.right)
            if _is_two_k_plus_one(base, node.var):
                s = _shape_exponent(exp_expr, env)
                if budget.mode == "heuristic":
                    return lambda: analytic.accelerated_alt_sum(
                        lambda k: Fraction(1, (2 * k + 1) ** s), prec
                    )
                return lambda: analytic.beta_series(s, prec, budget.max_terms)
        if (
            domain.start == 1
            and isinstance(body, Div)
            and isinstance(body.left, IntLit)
            and body.left.value == 1
            and isinstance(body.right, Pow)
            and isinstance(body.right.base, Var)
            and body.right.base.name == node.var
        ):
            s = _shape_exponent(body.right.exponent, env)
            if s % 2 == 0:
                return lambda: analytic.zeta_even_series(s, prec, budget.max_terms)
        return None

    if isinstance(node, BigProd) and isinstance(domain, InfiniteIntegers):
        if (
            domain.start == 1
            and isinstance(body, Sub)
            and isinstance(body.left, IntLit)
            and body.left.value == 1
            and isinstance(body.right, Div)
            and _is_alt_sign(body.right.left, node.var)
        ):
            base, exp_expr = _split_pow(body.right.right)
            if _is_two_k_plus_one(base, node.var):
                s = _shape_exponent(exp_expr, env)
                return lambda: analytic.odd_product_direct(s, prec, budget.max_terms)
        return None

    if isinstance(node, BigProd) and isinstance(domain, OddPrimes):
        p = node.var

        def _is_p_pow(x) -> tuple:
            base, exp_expr = _split_pow(x)
            if isinstance(base, Var) and base.name == p and exp_expr is not None:
                return (exp_expr,)
            return ()

        def _is_chi(x) -> bool:
            return isinstance(x, Chi4) and isinstance(x.operand, Var) and x.operand.name == p

        # p^s / (p^s - chi4(p))
        if isinstance(body, Div):
            num_pow = _is_p_pow(body.left)
            if (
                num_pow
                and isinstance(body.right, Sub)
                and _is_p_pow(body.right.left) == num_pow
                and _is_chi(body.right.right)
            ):
                s = _shape_exponent(num_pow[0], env)
                return lambda: analytic.beta_euler_product(s, prec, budget.prime_limit)

        if isinstance(body, Sub) and isinstance(body.left, IntLit) and body.left.value == 1:
            rhs = body.right
            # 1 - chi4(p) / p^s  -> reciprocal of the beta product
            if isinstance(rhs, Div) and _is_chi(rhs.left):
                den_pow = _is_p_pow(rhs.right)
                if den_pow:
                    s = _shape_exponent(den_pow[0], env)

                    def beta_recip():
                        enc = analytic.beta_euler_product(s, prec, budget.prime_limit)
                        one = BallReal.from_int(1, prec)
                        return analytic.Enclosure(
                            ball=one / enc.ball,
                            tail=enc.tail,
                            terms_used=enc.terms_used,
                            capped=enc.capped,
                            note=enc.note,
                            prime_limit_used=enc.prime_limit_used,
                        )

                    return beta_recip
            # 1 - 1 / p^s  -> odd part of the reciprocal zeta product
            if isinstance(rhs, Div) and isinstance(rhs.left, IntLit) and rhs.left.value == 1:
                den_pow = _is_p_pow(rhs.right)
                if den_pow:
                    s = _shape_exponent(den_pow[0], env)
                    if s % 2 == 0:

                        def zeta_odd_recip():
                            enc = analytic.zeta_euler_product(s, prec, budget.prime_limit)
                            # prod over odd p of (1 - p^-s) = 1 / (Z * (1 - 2^-s))
                            two_factor = BallReal.from_fraction(
                                1 - Fraction(1, 2**s), prec
                            )
                            one = BallReal.from_int(1, prec)
                            return analytic.Enclosure(
                                ball=one / (enc.ball * two_factor),
                                tail=enc.tail,
                                terms_used=enc.terms_used,
                                capped=enc.capped,
                                note=enc.note,
                                prime_limit_used=enc.prime_limit_used,
                            )

                        return zeta_odd_recip
        return None

    return None


_HEURISTIC_HARD_CAP = 1 << 16


def _heuristic_bigop(node, env, budget, prec, meta) -> BallReal:
    """Truncation doubling until the printed digits stabilize (non-rigorous)."""
    is_sum = isinstance(node, BigSum)
    domain = node.domain
    if isinstance(domain, OddPrimes):
        limit = min(budget.prime_limit, _HEURISTIC_HARD_CAP)
        values: Iterator[int] = iter(exactseq.odd_primes(max(limit, 3)))
        cap_name = f"prime_limit={budget.prime_limit}"
    else:
        limit = min(budget.max_terms, _HEURISTIC_HARD_CAP)
        values = iter(range(domain.start, domain.start + limit))
        cap_name = f"max_terms={budget.max_terms}"

    acc = BallReal.exact_zero(prec) if is_sum else BallReal.from_int(1, prec)
    count = 0
    checkpoint = 32
    prev = None
    last_term = None
    stabilized = False
    for value in values:
        inner = dict(env)
        inner[node.var] = value
        term = _eval(node.body, inner, budget, prec, meta)
        acc = (acc + term) if is_sum else (acc * term)
        last_term = term
        count += 1
        if count == checkpoint:
            rendered = acc.mid_str(budget.digits)
            if prev is not None and rendered == prev[1]:
                stabilized = True
                break
            prev = (acc, rendered)
            checkpoint *= 2
    meta.rigorous = False
    meta.terms_used = max(meta.terms_used, count)
    # Tail estimate: for power-law decay the whole tail is at most a few
    # checkpoint-to-checkpoint drifts (exactly 2x for 1/k^2 terms), so 4x the
    # last drift is a serviceable non-certified radius.  A lone part-filled
    # checkpoint falls back to the last term's magnitude.
    drift = mpfr(0)
    if prev is not None and prev[0] is not acc:
        drift = mpball.midpoint_distance_upper(prev[0], acc)
    if last_term is not None:
        step = last_term.abs_upper()
        if is_sum:
            drift = mpball._max(drift, step)
        else:
            one_off = (last_term - BallReal.from_int(1, prec)).abs_upper()
            drift = mpball._max(drift, one_off)
    if not stabilized:
        meta.notes.append(
            f"heuristic truncation did not stabilize to {budget.digits} digits "
            f"within {count} terms ({cap_name})"
        )
    meta.notes.append("heuristic estimate: radius is not a certified bound")
    return mpball.widened(acc, mpball._RUP.mul(drift, mpfr(4)))


# --- verdicts ----------------------------------------------------------------------

_LADDER = (1, 2, 4)


def verdict(identity: Identity, param_value: Optional[int], budget: EvalBudget) -> Verdict:
    """Classify one (identity, parameter) instance under the budget."""
    v, _ = _verdict_details(identity, param_value, budget)
    return v


def _digits_from_bound(m: mpfr, ceiling: int) -> int:
    """Largest d with m <= 10^-d (exact dyadic-vs-rational comparison)."""
    if not m > 0:
        return ceiling
    if m > 1:
        return 0
    q = mpq(m)  # exact: mpfr values are dyadic rationals
    d = max(0, int(-gmpy2.log10(m)))  # close initial guess
    while q * mpq(10) ** d > 1:
        d -= 1
    while d + 1 <= ceiling and q * mpq(10) ** (d + 1) <= 1:
        d += 1
    return max(0, min(d, ceiling))


def _verdict_details(identity, param_value, budget) -> tuple[Verdict, dict]:
    if identity.param is not None:
        name, lo, hi = identity.param
        if param_value is None or not lo <= param_value <= hi:
            raise ValueError(
                f"parameter {name}={param_value!r} outside declared range {lo}..{hi}"
            )
        env = {name: param_value}
    else:
        env = {}

    min_digits = identity.expect.min_digits if identity.expect.truth else None
    required = min_digits if min_digits is not None else 8
    ceiling = 4 * budget.digits + 8

    details: dict = {}
    last_reason = None
    for step in _LADDER:
        prec = budget.digits * step
        meta = _Meta()
        try:
            lhs = _eval(identity.lhs, env, budget, prec, meta)
            rhs = _eval(identity.rhs, env, budget, prec, meta)
        except (EngineError, BallError, ValueError) as exc:
            return Verdict.inconclusive(str(exc)), details

        details = {
            "lhs": lhs,
            "rhs": rhs,
            "terms_used": meta.terms_used,
            "prime_limit_used": meta.prime_limit_used,
            "rigorous": meta.rigorous,
            "note": "; ".join(dict.fromkeys(meta.notes)),
        }

        gap = mpball.certified_gap(lhs, rhs)
        if gap > 0:
            return Verdict.refuted(gap), details

        worst = mpball._max(
            mpball._max(lhs.rad, rhs.rad), mpball.midpoint_distance_upper(lhs, rhs)
        )
        d = _digits_from_bound(worst, ceiling)
        details["digits"] = d
        if d >= required:
            return Verdict.confirmed(d), details

        if meta.notes:
            last_reason = "; ".join(dict.fromkeys(meta.notes))
        if meta.budget_capped and not meta.floor_capped:
            # a user cap binds: higher precision rungs cannot tighten the tail
            break

    if last_reason is None:
        last_reason = (
            f"precision ladder exhausted at {budget.digits * _LADDER[-1]} digits: "
            f"certified {details.get('digits', 0)} of the required {required}"
        )
    else:
        last_reason = (
            f"certified {details.get('digits', 0)} of the required {required} digits: "
            + last_reason
        )
    return Verdict.inconclusive(last_reason), details


# --- reports -----------------------------------------------------------------------


@dataclass(frozen=True)
class _Record:
    ident: str
    param: Optional[int]
    verdict: Verdict
    lhs_mid: str
    lhs_rad: str
    rhs_mid: str
    rhs_rad: str
    terms_used: int
    prime_limit: Optional[int]
    matched: Optional[bool]  # None for inconclusive
    note: str = ""
    ms: Optional[float] = None


@dataclass(frozen=True)
class Report:
    corpus_path: str
    budget: EvalBudget
    records: tuple
    timings: bool = False

    @property
    def matched(self) -> int:
        return sum(1 for r in self.records if r.matched is True)

    @property
    def mismatched(self) -> int:
        return sum(1 for r in self.records if r.matched is False)

    @property
    def inconclusive(self) -> int:
        return sum(1 for r in self.records if r.matched is None)

    def to_json_dict(self) -> dict:
        results = []
        for r in self.records:
            entry = {
                "id": r.ident,
                "param": r.param,
                "verdict": r.verdict.kind,
                "digits_matched": r.verdict.digits_matched,
                "gap": mpball._decimal_str(r.verdict.gap, 4) if r.verdict.gap is not None else None,
                "lhs": {"mid": r.lhs_mid, "rad": r.lhs_rad},
                "rhs": {"mid": r.rhs_mid, "rad": r.rhs_rad},
                "terms_used": r.terms_used,
                "prime_limit": r.prime_limit,
            }
            if self.timings and r.ms is not None:
                entry["ms"] = r.ms
            results.append(entry)
        return {
            "corpus": self.corpus_path,
            "digits_requested": self.budget.digits,
            "mode": self.budget.mode,
            "results": results,
            "summary": {
                "matched": self.matched,
                "mismatched": self.mismatched,
                "inconclusive": self.inconclusive,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        header = f"corpus: {self.corpus_path}   digits: {self.budget.digits}   mode: {self.budget.mode}"
        lines = [header, ""]
        for r in self.records:
            param = "-" if r.param is None else str(r.param)
            status = {True: "ok", False: "MISMATCH", None: "?"}[r.matched]
            row = (
                f"{r.ident:<22} param={param:<3} {str(r.verdict):<46} "
                f"lhs={r.lhs_mid} ± {r.lhs_rad}  rhs={r.rhs_mid} ± {r.rhs_rad}  "
                f"terms={r.terms_used}"
            )
            if r.prime_limit is not None:
                row += f" P={r.prime_limit}"
            if self.timings and r.ms is not None:
                row += f" ms={r.ms:.1f}"
            lines.append(f"[{status:^8}] {row}")
            if r.note:
                lines.append(f"{'':>11}note: {r.note}")
        lines.append("")
        lines.append(
            f"summary: {self.matched} matched, {self.mismatched} mismatched, "
            f"{self.inconclusive} inconclusive"
        )
        return "\n".join(lines)


def _instances(identity: Identity):
    if identity.param is None:
        yield None
    else:
        _, lo, hi = identity.param
        yield from range(lo, hi + 1)


def run(
    corpus: Corpus,
    budget: EvalBudget,
    *,
    corpus_path: str = "<corpus>",
    only: Optional[str] = None,
    timings: bool = False,
) -> Report:
    """Verdict for every (identity, parameter) pair, in deterministic order."""
    if only is not None:
        items = [item for item in corpus if item.ident == only]
        if not items:
            raise KeyError(f"no identity named {only!r} in the corpus")
    else:
        items = list(corpus)

    sig_digits = budget.digits + 2
    records = []
    for item in items:
        for value in _instances(item):
            t0 = time.perf_counter()
            v, details = _verdict_details(item, value, budget)
            ms = (time.perf_counter() - t0) * 1000.0
            lhs = details.get("lhs")
            rhs = details.get("rhs")
            if v.kind == "confirmed":
                matched = True if item.expect.truth else False
            elif v.kind == "refuted":
                matched = False if item.expect.truth else True
            else:
                matched = None
            records.append(
                _Record(
                    ident=item.ident,
                    param=value,
                    verdict=v,
                    lhs_mid=lhs.mid_str(sig_digits) if lhs is not None else "-",
                    lhs_rad=lhs.rad_str() if lhs is not None else "-",
                    rhs_mid=rhs.mid_str(sig_digits) if rhs is not None else "-",
                    rhs_rad=rhs.rad_str() if rhs is not None else "-",
                    terms_used=details.get("terms_used", 0),
                    prime_limit=details.get("prime_limit_used"),
                    matched=matched,
                    note=details.get("note", ""),
                    ms=ms,
                )
            )
    return Report(corpus_path=corpus_path, budget=budget, records=tuple(records), timings=timings)
