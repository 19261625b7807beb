# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-double summation/product kernels.

Same contract as ``identicheck._kernels_py`` (which stays the reference
implementation); ``two_prod`` uses the hardware fused multiply-add instead
of Dekker splitting.  Must be compiled with -O3 -ffp-contract=off -- never
-ffast-math (it would break the error-free transformations), and never
implicit contraction (it would fuse the plain a*b + c accumulations below
into fma and lose bit-parity with the pure-Python mirror).
"""

from libc.math cimport fma


cdef struct DD:
    double hi
    double lo


cdef inline DD _two_sum(double a, double b) noexcept nogil:
    cdef DD r
    cdef double bb
    r.hi = a + b
    bb = r.hi - a
    r.lo = (a - (r.hi - bb)) + (b - bb)
    return r


cdef inline DD _quick_two_sum(double a, double b) noexcept nogil:
    cdef DD r
    r.hi = a + b
    r.lo = b - (r.hi - a)
    return r


cdef inline DD _two_prod(double a, double b) noexcept nogil:
    cdef DD r
    r.hi = a * b
    r.lo = fma(a, b, -r.hi)
    return r


cdef inline DD _dd_add(DD a, DD b) noexcept nogil:
    cdef DD s = _two_sum(a.hi, b.hi)
    cdef DD t = _two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = _quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return _quick_two_sum(s.hi, s.lo)


cdef inline DD _dd_mul(DD a, DD b) noexcept nogil:
    cdef DD p = _two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return _quick_two_sum(p.hi, p.lo)


cdef inline DD _dd_div(DD a, DD b) noexcept nogil:
    cdef DD t, r
    cdef double q1 = a.hi / b.hi
    t = _two_prod(q1, b.hi)
    t.lo += q1 * b.lo
    t = _quick_two_sum(t.hi, t.lo)
    t.hi = -t.hi
    t.lo = -t.lo
    r = _dd_add(a, t)
    return _quick_two_sum(q1, (r.hi + r.lo) / b.hi)


def mul_count(s: int) -> int:
    """Double-double multiplications used by the power chain for exponent s."""
    return (s.bit_length() - 1) + bin(s).count("1") - 1


cdef inline DD _recip_pow(double m, long s) noexcept nogil:
    cdef DD one
    one.hi = 1.0
    one.lo = 0.0
    cdef DD mm
    mm.hi = m
    mm.lo = 0.0
    cdef DD r = _dd_div(one, mm)
    cdef DD p = r
    cdef int i
    cdef int nbits = 0
    cdef long t = s
    while t:
        nbits += 1
        t >>= 1
    for i in range(nbits - 2, -1, -1):
        p = _dd_mul(p, p)
        if (s >> i) & 1:
            p = _dd_mul(p, r)
    return p


def alt_odd_power_sum(long n, long s):
    """sum_{k=0}^{n-1} (-1)^k (2k+1)^{-s}; returns (hi, lo, ops)."""
    cdef DD acc, t
    acc.hi = 0.0
    acc.lo = 0.0
    cdef long k
    with nogil:
        for k in range(n):
            t = _recip_pow(2.0 * k + 1.0, s)
            if k & 1:
                t.hi = -t.hi
                t.lo = -t.lo
            acc = _dd_add(acc, t)
    return acc.hi, acc.lo, n * (mul_count(int(s)) + 2)


def power_sum(long n, long s):
    """sum_{m=1}^{n} m**-s; returns (hi, lo, ops)."""
    cdef DD acc, t
    acc.hi = 0.0
    acc.lo = 0.0
    cdef long m
    with nogil:
        for m in range(1, n + 1):
            t = _recip_pow(<double> m, s)
            acc = _dd_add(acc, t)
    return acc.hi, acc.lo, n * (mul_count(int(s)) + 2)


def paired_odd_product(long J, long s):
    """prod_{j=1}^{J} (1 + (4j-1)**-s) * (1 - (4j+1)**-s); returns (hi, lo, ops)."""
    cdef DD acc, a, b, f
    acc.hi = 1.0
    acc.lo = 0.0
    cdef DD one
    one.hi = 1.0
    one.lo = 0.0
    cdef long j
    with nogil:
        for j in range(1, J + 1):
            a = _recip_pow(4.0 * j - 1.0, s)
            b = _recip_pow(4.0 * j + 1.0, s)
            f = _dd_add(one, a)
            acc = _dd_mul(acc, f)
            b.hi = -b.hi
            b.lo = -b.lo
            f = _dd_add(one, b)
            acc = _dd_mul(acc, f)
    return acc.hi, acc.lo, J * (2 * (mul_count(int(s)) + 1) + 4)


def prime_product(const long long[:] primes, long s, int mode):
    """prod over p in primes of 1/(1 - chi(p) * p**-s); returns (hi, lo, ops).

    mode 0: chi = 1 for every p (Euler factors of the plain zeta product).
    mode 1: chi = +1 if p % 4 == 1 else -1 (quadratic character mod 4;
            caller must pass odd primes only).
    """
    cdef DD acc, t, u
    acc.hi = 1.0
    acc.lo = 0.0
    cdef DD one
    one.hi = 1.0
    one.lo = 0.0
    cdef Py_ssize_t i, n = primes.shape[0]
    cdef long long p
    with nogil:
        for i in range(n):
            p = primes[i]
            t = _recip_pow(<double> p, s)
            if mode == 1 and (p & 3) == 3:
                t.hi = -t.hi
                t.lo = -t.lo
            t.hi = -t.hi
            t.lo = -t.lo
            u = _dd_add(one, t)
            acc = _dd_div(acc, u)
    return acc.hi, acc.lo, n * (mul_count(int(s)) + 3)
