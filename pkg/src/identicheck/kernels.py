"""Dispatcher for the double-double summation/product kernels.

Prefers the compiled extension (``identicheck._kernels``) and falls back to
the pure-Python mirror (``identicheck._kernels_py``) when the extension is
missing or when the environment variable ``IDENTICHECK_PURE_KERNELS`` is set
to a nonempty value.  Both implementations share one contract: each kernel
returns ``(hi, lo, ops)`` where ``hi + lo`` is the double-double result
(each part an exactly representable binary64) and ``ops`` counts the
double-double operations performed.

Error model
-----------
Each double-double add/mul/div has a proven relative error at most 16 units
of 2**-106 (Joldes, Muller & Popescu 2017 give 3u^2, 5u^2, and 15u^2 with
u = 2**-53), i.e. below 2**-102.  In every kernel all exact intermediate
quantities lie in [0, 2] (terms and factors are at most 4/3, partial sums of
the series involved never exceed zeta(2) < 1.65, partial products stay below
1.65), so error amplification along any data path is bounded by a factor 2
for sums and by the remaining partial product (< 2) for products.  A safe
composite bound for the absolute error of ``hi + lo`` is therefore

    |result - exact| <= ops * 2**-97        (per-op 2**-102, amplification 2,
                                             margin factor 8)

``eps_bound(ops)`` returns that quantity rounded up.  Callers must only use
these kernels for quantities whose intermediates satisfy the [0, 2] range
(all evaluators in ``analytic`` do) and must check ``fits(n, s, max_base)``
first, which rejects exponent/base combinations that could underflow to
subnormals and void the per-op bound.
"""

from __future__ import annotations

import math
import os

import gmpy2
from gmpy2 import mpfr

if os.environ.get("IDENTICHECK_PURE_KERNELS"):
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        COMPILED = False

alt_odd_power_sum = _impl.alt_odd_power_sum
power_sum = _impl.power_sum
paired_odd_product = _impl.paired_odd_product
prime_product = _impl.prime_product
mul_count = _impl.mul_count

_EPS_CTX = gmpy2.context(precision=32, round=gmpy2.RoundUp)
_PER_OP = mpfr(2) ** -97  # exact power of two


def eps_bound(ops: int) -> mpfr:
    """Rigorous upper bound on the absolute error of a kernel result."""
    return _EPS_CTX.mul(mpfr(ops), _PER_OP)


def fits(n: int, s: int, max_base: float) -> bool:
    """Whether a kernel run of n terms at exponent s stays in safe range.

    Requires every ``base**-s`` to stay far above the subnormal range (so
    the per-operation error bounds hold) and the term count to stay within
    exact-double integer territory.
    """
    if n <= 0:
        return False
    if n > 2**40 or s < 1:
        return False
    return s * math.log2(max_base) < 900.0
