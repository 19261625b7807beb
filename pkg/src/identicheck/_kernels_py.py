"""Pure-Python double-double summation/product kernels.

Fallback used when the compiled extension is unavailable.  The algorithms,
iteration order, and operation counts mirror ``identicheck._kernels``
exactly; only the speed differs.  See ``kernels.py`` for the shared error
model (every double-double operation carries a proven relative error well
below 2**-100; the dispatcher converts operation counts into a rigorous
radius contribution).

``two_prod`` uses Dekker splitting rather than a fused multiply-add; the
error term is still exact, so the per-operation bounds are identical.
"""

from __future__ import annotations

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float):
    # requires |a| >= |b| (true at every call site: b is a rounding error)
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float):
    p = a * b
    t = _SPLITTER * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLITTER * b
    bhi = t - (t - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(ahi: float, alo: float, bhi: float, blo: float):
    s1, s2 = _two_sum(ahi, bhi)
    t1, t2 = _two_sum(alo, blo)
    s2 += t1
    s1, s2 = _quick_two_sum(s1, s2)
    s2 += t2
    return _quick_two_sum(s1, s2)


def _dd_mul(ahi: float, alo: float, bhi: float, blo: float):
    p1, p2 = _two_prod(ahi, bhi)
    p2 += ahi * blo + alo * bhi
    return _quick_two_sum(p1, p2)


def _dd_div(ahi: float, alo: float, bhi: float, blo: float):
    q1 = ahi / bhi
    t1, t2 = _two_prod(q1, bhi)
    t2 += q1 * blo
    t1, t2 = _quick_two_sum(t1, t2)
    r1, r2 = _dd_add(ahi, alo, -t1, -t2)
    q2 = (r1 + r2) / bhi
    return _quick_two_sum(q1, q2)


def mul_count(s: int) -> int:
    """Double-double multiplications used by the power chain for exponent s."""
    return (s.bit_length() - 1) + bin(s).count("1") - 1


def _recip_pow(m: float, s: int):
    """(1/m)**s by left-to-right binary exponentiation in double-double."""
    rhi, rlo = _dd_div(1.0, 0.0, m, 0.0)
    phi, plo = rhi, rlo
    for i in range(s.bit_length() - 2, -1, -1):
        phi, plo = _dd_mul(phi, plo, phi, plo)
        if (s >> i) & 1:
            phi, plo = _dd_mul(phi, plo, rhi, rlo)
    return phi, plo


def alt_odd_power_sum(n: int, s: int):
    """sum_{k=0}^{n-1} (-1)^k (2k+1)^{-s}; returns (hi, lo, ops)."""
    shi = slo = 0.0
    for k in range(n):
        thi, tlo = _recip_pow(2.0 * k + 1.0, s)
        if k & 1:
            thi, tlo = -thi, -tlo
        shi, slo = _dd_add(shi, slo, thi, tlo)
    return shi, slo, n * (mul_count(s) + 2)


def power_sum(n: int, s: int):
    """sum_{m=1}^{n} m**-s; returns (hi, lo, ops)."""
    shi = slo = 0.0
    for m in range(1, n + 1):
        thi, tlo = _recip_pow(float(m), s)
        shi, slo = _dd_add(shi, slo, thi, tlo)
    return shi, slo, n * (mul_count(s) + 2)


def paired_odd_product(J: int, s: int):
    """prod_{j=1}^{J} (1 + (4j-1)**-s) * (1 - (4j+1)**-s); returns (hi, lo, ops)."""
    phi, plo = 1.0, 0.0
    for j in range(1, J + 1):
        ahi, alo = _recip_pow(4.0 * j - 1.0, s)
        bhi, blo = _recip_pow(4.0 * j + 1.0, s)
        f1h, f1l = _dd_add(1.0, 0.0, ahi, alo)
        f2h, f2l = _dd_add(1.0, 0.0, -bhi, -blo)
        phi, plo = _dd_mul(phi, plo, f1h, f1l)
        phi, plo = _dd_mul(phi, plo, f2h, f2l)
    return phi, plo, J * (2 * (mul_count(s) + 1) + 4)


def prime_product(primes, s: int, mode: int):
    """prod over p in primes of 1/(1 - chi(p) * p**-s); returns (hi, lo, ops).

    mode 0: chi = 1 for every p (Euler factors of the plain zeta product).
    mode 1: chi = +1 if p % 4 == 1 else -1 (quadratic character mod 4;
            caller must pass odd primes only).
    """
    phi, plo = 1.0, 0.0
    n = 0
    for p in primes:
        p = int(p)
        thi, tlo = _recip_pow(float(p), s)
        if mode == 1 and p % 4 == 3:
            thi, tlo = -thi, -tlo
        uhi, ulo = _dd_add(1.0, 0.0, -thi, -tlo)
        phi, plo = _dd_div(phi, plo, uhi, ulo)
        n += 1
    return phi, plo, n * (mul_count(s) + 3)
