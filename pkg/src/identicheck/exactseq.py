"""Exact integer and rational sequences: Euler numbers, Bernoulli numbers,
the mod-4 character, odd primes, factorials and binomials.

Everything in this module is exact (Python ints and ``fractions.Fraction``);
it is the oracle layer the ball-arithmetic code is tested against.  Two
numbering conventions are exposed deliberately:

* ``euler_numbers`` / ``euler_number`` use the modern signed convention
  (E_1, E_3, ... vanish; E_0, E_2, E_4, ... alternate in sign).
* ``chrystal_euler`` and ``bernoulli_hist`` use the positive, 1-indexed
  convention of the 19th-century textbooks (1, 5, 61, ... and
  1/6, 1/30, 1/42, ...), which is what the verified identities are
  phrased in.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List

import numpy as np

# Exact scalar aliases; kept abstract so callers don't care about the backing
# types (arbitrary-precision host int, normalized host rational).
ExactInt = int
ExactRational = Fraction

__all__ = [
    "ExactInt",
    "ExactRational",
    "euler_numbers",
    "euler_number",
    "chrystal_euler",
    "bernoulli_modern_even",
    "bernoulli_hist",
    "chi4",
    "is_prime",
    "PrimeStream",
    "odd_primes",
    "factorial",
    "binomial",
]


# ---------------------------------------------------------------------------
# Euler numbers


def euler_numbers(n_max: int) -> List[ExactInt]:
    """Return [E_0, E_2, ..., E_{2*floor(n_max/2)}] in the signed convention.

    Uses the recurrence sum(C(2n, 2k) * E_{2k}, k=0..n) = 0 (n >= 1), which
    is the Cauchy-product form of sech(t) * cosh(t) = 1.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    count = n_max // 2 + 1  # number of even indices 0, 2, ..., <= n_max
    es: List[int] = [1]
    for n in range(1, count):
        acc = 0
        for k in range(n):
            acc += math.comb(2 * n, 2 * k) * es[k]
        es.append(-acc)
    return es


def euler_number(n: int) -> ExactInt:
    """E_n in the signed convention; zero for odd n."""
    if n < 0:
        raise ValueError("Euler number index must be >= 0")
    if n % 2 == 1:
        return 0
    return euler_numbers(n)[-1]


def chrystal_euler(m: int) -> ExactInt:
    """The m-th positive Euler number |E_{2m}|, 1-indexed: 1, 5, 61, 1385, ...

    This is the sequence the old texts call E_1, E_2, E_3, ...; it equals
    (-1)^m * E_{2m} in the signed convention.
    """
    if m < 1:
        raise ValueError("chrystal_euler is 1-indexed; need m >= 1")
    value = euler_number(2 * m)
    assert (-1) ** m * value > 0, "sign pattern of E_{2m} broken"
    return abs(value)


# ---------------------------------------------------------------------------
# Bernoulli numbers

_bern_lock = threading.Lock()
_bern_cache: List[Fraction] = [Fraction(1)]  # B_0, B_1, ... modern convention


def _extend_bernoulli(n: int) -> None:
    # Recurrence sum(C(m+1, j) * B_j, j=0..m) = 0 for m >= 1, B_1 = -1/2.
    with _bern_lock:
        while len(_bern_cache) <= n:
            m = len(_bern_cache)
            acc = Fraction(0)
            for j in range(m):
                acc += math.comb(m + 1, j) * _bern_cache[j]
            _bern_cache.append(-acc / (m + 1))


def bernoulli_modern_even(n: int) -> ExactRational:
    """Signed modern Bernoulli number B_n for even n (B_2 = 1/6, B_4 = -1/30)."""
    if n < 0 or n % 2 == 1:
        raise ValueError("need an even index >= 0")
    _extend_bernoulli(n)
    return _bern_cache[n]


def bernoulli_hist(m: int) -> ExactRational:
    """The m-th positive Bernoulli number |B_{2m}|, 1-indexed: 1/6, 1/30, ...

    The verified identities are stated in this historical convention.
    """
    if m < 1:
        raise ValueError("bernoulli_hist is 1-indexed; need m >= 1")
    return abs(bernoulli_modern_even(2 * m))


# ---------------------------------------------------------------------------
# Primes and the mod-4 character


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (intended for n < 2^52)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def chi4(p: int) -> int:
    """The nontrivial character mod 4 at an odd prime: +1 if p = 4m+1, -1 if p = 4m-1.

    Rejects 2 and composites; the Euler products this feeds run over odd
    primes only.
    """
    if p == 2:
        raise ValueError("chi4 is undefined at the prime 2 (even prime excluded)")
    if not is_prime(p):
        raise ValueError(f"chi4 argument {p} is not prime")
    return 1 if p % 4 == 1 else -1


@dataclass(frozen=True)
class PrimeStream:
    """Ascending odd primes 3, 5, 7, 11, ... up to an inclusive limit."""

    limit: int
    values: np.ndarray  # int64, read-only

    def __iter__(self) -> Iterator[int]:
        return iter(self.values.tolist())

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return int(self.values[i])


_sieve_lock = threading.Lock()
_sieve_limit = 0
_sieve_primes = np.zeros(0, dtype=np.int64)  # odd primes only


def _sieve_upto(limit: int) -> np.ndarray:
    is_comp = np.zeros(limit + 1, dtype=bool)
    is_comp[:2] = True
    for p in range(2, int(limit**0.5) + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
    primes = np.flatnonzero(~is_comp).astype(np.int64)
    return primes[primes != 2]


def odd_primes(limit: int) -> PrimeStream:
    """All odd primes <= limit, sieved once and cached for reuse.

    The cache only grows; smaller requests are served as slices, so the
    stream is safe to share across threads after creation.
    """
    if limit < 3:
        raise ValueError("need limit >= 3 to produce any odd prime")
    global _sieve_limit, _sieve_primes
    with _sieve_lock:
        if limit > _sieve_limit:
            _sieve_primes = _sieve_upto(limit)
            _sieve_limit = limit
        if limit == _sieve_limit:
            values = _sieve_primes
        else:
            values = _sieve_primes[: int(np.searchsorted(_sieve_primes, limit, "right"))]
    values.setflags(write=False)
    return PrimeStream(limit=limit, values=values)


# ---------------------------------------------------------------------------
# Factorials


def factorial(n: int) -> ExactInt:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return math.factorial(n)


def binomial(n: int, k: int) -> ExactInt:
    if n < 0 or k < 0:
        raise ValueError("binomial needs n, k >= 0")
    if k > n:
        raise ValueError("binomial needs k <= n")
    return math.comb(n, k)
