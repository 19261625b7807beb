"""Rigorous verification of classical series and product identities.

Evaluates both sides of an identity as arbitrary-precision enclosures
(midpoint +/- radius) and reports how many decimal digits are certified to
agree -- or a certified gap when the two sides provably differ.
"""

__version__ = "0.1.0"

from .dsl import Corpus, DslError, Identity, builtin_corpus, parse_corpus, parse_expr  # noqa: F401
from .engine import EvalBudget, Report, Verdict, evaluate, run, verdict  # noqa: F401
from .mpball import BallComplex, BallError, BallReal  # noqa: F401
