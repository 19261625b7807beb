"""Arbitrary-precision ball arithmetic: every value is carried as a
midpoint +/- radius pair such that the exact mathematical result of an
operation is always inside the output ball.

Midpoints are MPFR floats at a working precision derived from the requested
decimal digits (plus guard digits); radii are small-precision MPFR floats
that are only ever rounded upward.  Primitive operations are evaluated twice
under downward/upward rounding, so the local rounding error is enclosed
exactly rather than estimated; elementary functions are evaluated on the
interval endpoints (they are piecewise monotone), which keeps the enclosure
tight without per-function derivative bounds.

The one genuinely nontrivial function here is ``gamma``: it shifts the
argument into a region where the asymptotic log-Gamma series applies, sums
that series with exact rational coefficients, and adds the standard explicit
remainder bound (first omitted term times sec^{2N}(theta/2), valid for
|arg w| < pi/2) to the radius.  Arguments left of Re(z) = 1/2 go through the
reflection formula.  The same code path serves real and complex balls; a
real input is promoted, and the imaginary enclosure -- which must contain
zero -- is checked and discarded on the way out.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

from . import exactseq

__all__ = [
    "BallError",
    "BallReal",
    "BallComplex",
    "bits_for_digits",
    "const_pi",
    "arith",
    "elem",
    "gamma",
    "intersects",
    "certified_gap",
    "midpoint_distance_upper",
]


class BallError(ValueError):
    """Raised when an operation's precondition on an enclosure fails."""


# --- contexts ---------------------------------------------------------------

_LOG2_10 = math.log2(10)

# Radius arithmetic runs at a fixed small precision.  _RUP only ever rounds
# away from zero on nonnegative quantities, so radius results are safe upper
# bounds; _RDN is used where a *lower* bound is conservative (denominators,
# certified gaps).
_RAD_BITS = 32
_RUP = gmpy2.context(precision=_RAD_BITS, round=gmpy2.RoundUp)
_RDN = gmpy2.context(precision=_RAD_BITS, round=gmpy2.RoundDown)

_Z = mpfr(0)  # mpfr operand that forces rounded mpfr results out of contexts
_ctx_cache: dict = {}

# NOTE: gmpy2's builtin unary ``-x``, ``abs(x)`` and ``gmpy2.maxnum`` round to
# the *global* (53-bit) context, silently truncating high-precision mpfr
# values.  All negation/abs/max on midpoints below must go through an
# explicit context (exact when the context precision covers the operand) or
# plain comparisons.


def _max(a, b):
    """Exact maximum: comparison only, no context rounding."""
    return a if a >= b else b


def bits_for_digits(digits: int) -> int:
    """Binary working precision for `digits` requested decimal digits.

    Adds 10 + digits/10 guard decimal digits so that accumulated midpoint
    rounding stays far below the tail/propagation radius.
    """
    guard = 10 + digits // 10
    return int((digits + guard) * _LOG2_10) + 4


def _ctxs(bits: int):
    pair = _ctx_cache.get(bits)
    if pair is None:
        pair = (
            gmpy2.context(precision=bits, round=gmpy2.RoundDown),
            gmpy2.context(precision=bits, round=gmpy2.RoundUp),
        )
        _ctx_cache[bits] = pair
    return pair


def _rup(x) -> mpfr:
    """Round any nonnegative value up into radius precision."""
    return _RUP.add(x, _Z)


def _rup_abs(x) -> mpfr:
    """Upper bound of |x| at radius precision (sign handled exactly)."""
    return _RUP.minus(x) if x < 0 else _RUP.add(x, _Z)


def _rdn_abs(x) -> mpfr:
    """Lower bound of |x| at radius precision."""
    return _RDN.minus(x) if x < 0 else _RDN.add(x, _Z)


# --- real balls -------------------------------------------------------------

Number = Union[int, Fraction, mpq]


class BallReal:
    """A real enclosure mid +/- rad at a stated decimal precision."""

    __slots__ = ("mid", "rad", "prec", "_bits")

    def __init__(self, mid: mpfr, rad: mpfr, prec: int, _bits: int | None = None):
        self.mid = mid
        self.rad = rad
        self.prec = prec
        self._bits = _bits if _bits is not None else bits_for_digits(prec)
        if not (gmpy2.is_finite(mid) and gmpy2.is_finite(rad)):
            raise BallError("enclosure overflowed the representable range")
        if rad < 0:
            raise BallError("negative radius")

    # -- construction

    @classmethod
    def from_int(cls, n: int, prec: int) -> "BallReal":
        return cls.from_fraction(n, prec)

    @classmethod
    def from_fraction(cls, q: Number, prec: int) -> "BallReal":
        """Smallest representable ball around an exact rational (or int)."""
        if isinstance(q, Fraction):
            q = mpq(q.numerator, q.denominator)
        bits = bits_for_digits(prec)
        dn, up = _ctxs(bits)
        lo = dn.add(q, _Z)
        hi = up.add(q, _Z)
        return cls(lo, _RUP.sub(hi, lo), prec, bits)

    @classmethod
    def exact_zero(cls, prec: int) -> "BallReal":
        return cls(mpfr(0), mpfr(0), prec)

    @classmethod
    def from_endpoints(cls, lo: mpfr, hi: mpfr, prec: int) -> "BallReal":
        """Ball covering the closed interval [lo, hi]."""
        if not lo <= hi:
            raise BallError("from_endpoints requires lo <= hi")
        return cls._from_endpoints(lo, hi, prec, bits_for_digits(prec))

    @classmethod
    def _from_endpoints(cls, lo: mpfr, hi: mpfr, prec: int, bits: int) -> "BallReal":
        # Centered ball covering [lo, hi]; mid is rounded, so pad with the
        # directed distances to both endpoints.
        dn, up = _ctxs(bits)
        mid = dn.mul(dn.add(lo, hi), mpfr("0.5"))
        r1 = _RUP.sub(up.sub(mid, lo), _Z) if mid >= lo else mpfr(0)
        r2 = _rup(up.sub(hi, mid)) if hi >= mid else mpfr(0)
        return cls(mid, gmpy2.maxnum(_rup(r1), _rup(r2)), prec, bits)

    # -- interval views

    def lower(self) -> mpfr:
        dn, _ = _ctxs(self._bits)
        return dn.sub(self.mid, self.rad)

    def upper(self) -> mpfr:
        _, up = _ctxs(self._bits)
        return up.add(self.mid, self.rad)

    def abs_upper(self) -> mpfr:
        """Upper bound on |x| over the ball, at radius precision."""
        return _max(_rup_abs(self.lower()), _rup_abs(self.upper()))

    def contains(self, q: Number) -> bool:
        """Exact containment test for a rational/integer point."""
        if isinstance(q, Fraction):
            q = mpq(q.numerator, q.denominator)
        return self.lower() <= q <= self.upper()  # mpfr-vs-mpq compares exactly

    def contains_zero(self) -> bool:
        return self.contains(0)

    def is_strictly_positive(self) -> bool:
        return self.lower() > 0

    # -- arithmetic

    def _coerce(self, other) -> "BallReal":
        if isinstance(other, BallReal):
            return other
        if isinstance(other, (int, Fraction, mpq)):
            return BallReal.from_fraction(other, self.prec)
        raise TypeError(f"cannot mix BallReal with {type(other).__name__}")

    def _binary(self, other: "BallReal", opname: str) -> "BallReal":
        prec = max(self.prec, other.prec)
        bits = max(self._bits, other._bits)
        dn, up = _ctxs(bits)
        f_dn = getattr(dn, opname)
        f_up = getattr(up, opname)
        lo = f_dn(self.mid, other.mid)
        hi = f_up(self.mid, other.mid)
        round_err = _RUP.sub(hi, lo)
        if opname in ("add", "sub"):
            prop = _RUP.add(self.rad, other.rad)
        elif opname == "mul":
            prop = _RUP.add(
                _RUP.add(
                    _RUP.mul(_rup_abs(self.mid), other.rad),
                    _RUP.mul(_rup_abs(other.mid), self.rad),
                ),
                _RUP.mul(self.rad, other.rad),
            )
        else:  # div
            den_lo = _RDN.sub(_rdn_abs(other.mid), other.rad)
            if not den_lo > 0:
                raise BallError("possible division by zero")
            q_abs = _max(_rup_abs(lo), _rup_abs(hi))
            prop = _RUP.div(
                _RUP.add(self.rad, _RUP.mul(q_abs, other.rad)), den_lo
            )
        return BallReal(lo, _RUP.add(round_err, prop), prec, bits)

    def __add__(self, other):
        return self._binary(self._coerce(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(self._coerce(other), "sub")

    def __rsub__(self, other):
        return self._coerce(other)._binary(self, "sub")

    def __mul__(self, other):
        return self._binary(self._coerce(other), "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(self._coerce(other), "div")

    def __rtruediv__(self, other):
        return self._coerce(other)._binary(self, "div")

    def __neg__(self):
        dn, _ = _ctxs(self._bits)
        return BallReal(dn.minus(self.mid), self.rad, self.prec, self._bits)

    def __abs__(self):
        lo, hi = self.lower(), self.upper()
        if lo >= 0:
            return self
        if hi <= 0:
            return -self
        # straddles zero: |x| ranges over [0, max(|lo|, hi)]
        _, up = _ctxs(self._bits)
        top = _max(up.minus(lo), hi)
        return BallReal._from_endpoints(mpfr(0), top, self.prec, self._bits)

    def int_pow(self, k: int) -> "BallReal":
        """x**k by binary exponentiation over ball multiplication."""
        if not isinstance(k, int):
            raise TypeError("int_pow exponent must be an integer")
        if k < 0:
            return BallReal.from_int(1, self.prec) / self.int_pow(-k)
        result = BallReal.from_int(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __pow__(self, k: int):
        return self.int_pow(k)

    # -- formatting

    def mid_str(self, sig: int | None = None) -> str:
        return _decimal_str(self.mid, sig or (self.prec + 2))

    def rad_str(self) -> str:
        return _decimal_str(self.rad, 3)

    def __repr__(self):
        return f"BallReal({self.mid_str(min(self.prec + 2, 20))} ± {self.rad_str()})"


def _decimal_str(x: mpfr, sig: int) -> str:
    """Deterministic scientific-notation rendering with `sig` digits."""
    if x == 0:
        return "0"
    digits, exp, _ = x.digits(10, sig)
    sign = ""
    if digits.startswith("-"):
        sign, digits = "-", digits[1:]
    mantissa = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
    return f"{sign}{mantissa}e{exp - 1:+03d}"


# --- constants and elementary functions -------------------------------------


def const_pi(prec: int) -> BallReal:
    """Enclosure of pi with radius <= 10**-prec (one working-precision ulp)."""
    bits = bits_for_digits(prec)
    dn, up = _ctxs(bits)
    return BallReal._from_endpoints(dn.const_pi(), up.const_pi(), prec, bits)


def _monotone(x: BallReal, fname: str) -> BallReal:
    """Image ball of an increasing function: evaluate directed at endpoints."""
    dn, up = _ctxs(x._bits)
    lo = getattr(dn, fname)(x.lower())
    hi = getattr(up, fname)(x.upper())
    return BallReal._from_endpoints(lo, hi, x.prec, x._bits)


def exp(x: BallReal) -> BallReal:
    return _monotone(x, "exp")


def ln(x: BallReal) -> BallReal:
    if not x.is_strictly_positive():
        raise BallError("ln requires a strictly positive enclosure")
    return _monotone(x, "log")


def sqrt(x: BallReal) -> BallReal:
    if x.lower() < 0:
        raise BallError("sqrt requires a nonnegative enclosure")
    return _monotone(x, "sqrt")


def sinh(x: BallReal) -> BallReal:
    return _monotone(x, "sinh")


def cosh(x: BallReal) -> BallReal:
    lo, hi = x.lower(), x.upper()
    dn, up = _ctxs(x._bits)
    if lo >= 0:
        return BallReal._from_endpoints(dn.cosh(lo), up.cosh(hi), x.prec, x._bits)
    if hi <= 0:
        return BallReal._from_endpoints(dn.cosh(hi), up.cosh(lo), x.prec, x._bits)
    # interval straddles the minimum at 0
    top = _max(up.cosh(lo), up.cosh(hi))
    return BallReal._from_endpoints(mpfr(1), top, x.prec, x._bits)


def _lipschitz1(x: BallReal, fname: str) -> BallReal:
    # sin/cos/atan have |f'| <= 1: evaluate at the midpoint under both
    # roundings and widen by the input radius.
    dn, up = _ctxs(x._bits)
    lo = getattr(dn, fname)(x.mid)
    hi = getattr(up, fname)(x.mid)
    out = BallReal._from_endpoints(lo, hi, x.prec, x._bits)
    return BallReal(out.mid, _RUP.add(out.rad, x.rad), x.prec, x._bits)


def _sin(x: BallReal) -> BallReal:
    return _lipschitz1(x, "sin")


def _cos(x: BallReal) -> BallReal:
    return _lipschitz1(x, "cos")


def _atan(x: BallReal) -> BallReal:
    return _lipschitz1(x, "atan")


_ELEM = {"exp": exp, "ln": ln, "sqrt": sqrt, "cosh": cosh, "sinh": sinh}


def elem(x, name: str):
    """Dispatch an elementary function by name (complex exp/ln included)."""
    if isinstance(x, BallComplex):
        if name == "exp":
            return x.exp()
        if name == "ln":
            return x.ln()
        raise BallError(f"elementary function {name!r} not defined for complex balls")
    try:
        return _ELEM[name](x)
    except KeyError:
        raise BallError(f"unknown elementary function {name!r}") from None


def arith(a, b, op: str):
    """Dispatch a basic operation by name; op in add/sub/mul/div/int_pow."""
    if op == "int_pow":
        return a.int_pow(b)
    if op in ("add", "sub", "mul", "div"):
        table = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
        return table[op](b)
    raise BallError(f"unknown operation {op!r}")


# --- comparison helpers ------------------------------------------------------


def midpoint_distance_upper(a: BallReal, b: BallReal) -> mpfr:
    bits = max(a._bits, b._bits)
    dn, up = _ctxs(bits)
    return _max(_rup_abs(up.sub(a.mid, b.mid)), _rup_abs(dn.sub(a.mid, b.mid)))


def _midpoint_distance_lower(a: BallReal, b: BallReal) -> mpfr:
    bits = max(a._bits, b._bits)
    dn, up = _ctxs(bits)
    s_dn = dn.sub(a.mid, b.mid)
    s_up = up.sub(a.mid, b.mid)
    if s_dn > 0:
        return _RDN.add(s_dn, _Z)
    if s_up < 0:
        return _RDN.minus(s_up)
    return mpfr(0)


def certified_gap(a: BallReal, b: BallReal) -> mpfr:
    """Certified lower bound on the separation of the two enclosures.

    Positive iff the balls are provably disjoint.
    """
    return _RDN.sub(_RDN.sub(_midpoint_distance_lower(a, b), a.rad), b.rad)


def intersects(a: BallReal, b: BallReal) -> bool:
    """True unless the balls are *provably* disjoint."""
    return not certified_gap(a, b) > 0


def widened(x: BallReal, extra: mpfr) -> BallReal:
    """Same midpoint, radius enlarged by ``extra`` (rounded up)."""
    if extra < 0:
        raise BallError("widened requires a nonnegative increment")
    # feed the increment straight to the round-up context: a plain mpfr()
    # conversion would round at the global (53-bit) precision, possibly down
    return BallReal(x.mid, _RUP.add(x.rad, extra), x.prec)


# --- complex balls -----------------------------------------------------------


class BallComplex:
    """Rectangular complex enclosure: independent real balls for re and im."""

    __slots__ = ("re", "im")

    def __init__(self, re: BallReal, im: BallReal):
        self.re = re
        self.im = im

    @classmethod
    def from_real(cls, x: BallReal) -> "BallComplex":
        return cls(x, BallReal.exact_zero(x.prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def conj(self) -> "BallComplex":
        return BallComplex(self.re, -self.im)

    def __neg__(self):
        return BallComplex(-self.re, -self.im)

    def __add__(self, other):
        other = _to_complex(other, self.prec)
        return BallComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _to_complex(other, self.prec)
        return BallComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _to_complex(other, self.prec) - self

    def __mul__(self, other):
        other = _to_complex(other, self.prec)
        a, b, c, d = self.re, self.im, other.re, other.im
        return BallComplex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _to_complex(other, self.prec)
        den = other.abs2()
        num = self * other.conj()
        return BallComplex(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return _to_complex(other, self.prec) / self

    def abs2(self) -> BallReal:
        return self.re * self.re + self.im * self.im

    def scale(self, s: BallReal) -> "BallComplex":
        return BallComplex(self.re * s, self.im * s)

    def int_pow(self, k: int) -> "BallComplex":
        if k < 0:
            return _to_complex(1, self.prec) / self.int_pow(-k)
        result = _to_complex(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exp(self) -> "BallComplex":
        # exp(x+iy) = exp(x) * (cos y + i sin y)
        ex = exp(self.re)
        return BallComplex(ex * _cos(self.im), ex * _sin(self.im))

    def ln(self) -> "BallComplex":
        # Principal branch, restricted to the right half-plane where our
        # callers live; log|z| = log(re^2+im^2)/2 and arg = atan(im/re).
        if not self.re.is_strictly_positive():
            raise BallError("complex ln requires Re(z) strictly positive")
        half = BallReal.from_fraction(Fraction(1, 2), self.prec)
        return BallComplex(ln(self.abs2()) * half, _atan(self.im / self.re))

    def __repr__(self):
        return f"BallComplex({self.re!r}, {self.im!r})"


def _to_complex(v, prec: int) -> BallComplex:
    if isinstance(v, BallComplex):
        return v
    if isinstance(v, BallReal):
        return BallComplex.from_real(v)
    if isinstance(v, (int, Fraction, mpq)):
        return BallComplex.from_real(BallReal.from_fraction(v, prec))
    raise TypeError(f"cannot coerce {type(v).__name__} to BallComplex")


# --- Gamma -------------------------------------------------------------------


def _shift_threshold(prec: int) -> int:
    # Re(w) >= ~0.4 * working-digits makes the asymptotic series bottom out
    # below the target before its terms turn around (minimum near k = pi*|w|).
    guard = 10 + prec // 10
    return max(8, (4 * (prec + guard)) // 10 + 6)


def _sin_pi(z: BallComplex, pi_ball: BallReal) -> BallComplex:
    # sin(w) = (exp(iw) - exp(-iw)) / (2i), w = pi*z
    w = z.scale(pi_ball)
    iw = BallComplex(-w.im, w.re)
    e1 = iw.exp()
    e2 = (-iw).exp()
    d = e1 - e2
    half = BallReal.from_fraction(Fraction(1, 2), z.prec)
    return BallComplex(d.im * half, -(d.re * half))


def _gamma_complex(z: BallComplex) -> BallComplex:
    prec = z.prec
    bits = bits_for_digits(prec)
    re_lo, re_hi = z.re.lower(), z.re.upper()
    im_lo, im_hi = z.im.lower(), z.im.upper()

    if im_lo <= 0 <= im_hi:
        n_hi = min(int(gmpy2.floor(re_hi)), 0)
        if n_hi >= gmpy2.ceil(re_lo):
            raise BallError("Gamma pole: enclosure intersects a nonpositive integer")

    if z.re.mid < mpfr("0.5"):
        # Reflection into the right half-plane: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
        pi_ball = const_pi(prec)
        return _to_complex(pi_ball, prec) / (_sin_pi(z, pi_ball) * _gamma_complex(1 - z))

    # Shift until the series region is reached and |arg w| <= atan(1/4),
    # which keeps the remainder's sec^{2N}(theta/2) factor below 1.008^N.
    im_abs_hi = _max(_rup_abs(im_lo), _rup_abs(im_hi))
    need = max(
        float(_shift_threshold(prec) - re_lo),
        float(_RUP.sub(_RUP.mul(mpfr(4), im_abs_hi), _RDN.add(re_lo, _Z))),
    )
    n = max(0, math.ceil(need))
    w = z + n

    lng = _lngamma_series(w, prec, bits)
    g = lng.exp()
    if n == 0:
        return g
    prod = _to_complex(1, prec)
    for i in range(n):
        prod = prod * (z + i)
    return g / prod


def _lngamma_series(w: BallComplex, prec: int, bits: int) -> BallComplex:
    # log Gamma(w) = (w - 1/2) log w - w + log(2 pi)/2 + sum_k t_k + R,
    # t_k = B_{2k} / (2k (2k-1) w^{2k-1});  |R| <= |t_next| * sec^{2N}(th/2).
    pi_ball = const_pi(prec)
    half = BallReal.from_fraction(Fraction(1, 2), prec)
    log_w = w.ln()
    s = (w - half) * log_w - w + BallComplex.from_real(ln(pi_ball + pi_ball) * half)

    w_re_lo = _RDN.add(w.re.lower(), _Z)  # also a lower bound for |w|
    inv_w = _to_complex(1, prec) / w
    inv_w2 = inv_w * inv_w
    p = inv_w
    target = mpfr(2) ** (-(bits + 2))
    kmax = int(3.15 * float(w_re_lo)) + 2
    k = 1
    while True:
        coef = exactseq.bernoulli_modern_even(2 * k) / Fraction(2 * k * (2 * k - 1))
        # upper bound for the k-th term magnitude at this w
        t_bound = _RUP.div(
            _RUP.add(mpq(abs(coef.numerator), coef.denominator), _Z),
            _RDN.pow(w_re_lo, 2 * k - 1),
        )
        if t_bound <= target or k > kmax:
            # remainder bound: first omitted term times sec^{2k}(theta/2)
            tan_up = _RUP.div(
                _max(_rup_abs(w.im.lower()), _rup_abs(w.im.upper())), w_re_lo
            )
            theta_up = _RUP.atan(tan_up)
            sec_up = _RUP.div(mpfr(1), _RDN.cos(_RDN.mul(theta_up, mpfr("0.5"))))
            r_bound = t_bound
            for _ in range(2 * k):
                r_bound = _RUP.mul(r_bound, sec_up)
            s = BallComplex(
                BallReal(s.re.mid, _RUP.add(s.re.rad, r_bound), prec, s.re._bits),
                BallReal(s.im.mid, _RUP.add(s.im.rad, r_bound), prec, s.im._bits),
            )
            return s
        term = p.scale(BallReal.from_fraction(coef, prec))
        s = s + term
        p = p * inv_w2
        k += 1


def gamma(z):
    """Enclosure of Gamma(z) for a real or complex ball.

    The ball must exclude the poles at 0, -1, -2, ...; otherwise a
    ``BallError`` ("Gamma pole") is raised.
    """
    if isinstance(z, BallReal):
        out = _gamma_complex(BallComplex.from_real(z))
        if not out.im.contains_zero():
            raise BallError("internal: Gamma of a real ball lost realness")
        return out.re
    if isinstance(z, BallComplex):
        return _gamma_complex(z)
    raise TypeError("gamma expects BallReal or BallComplex")
