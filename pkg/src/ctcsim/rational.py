"""Exact rational scalar used by every probability and amplitude in the package.

Two interchangeable backends provide the same contract (canonical form with
gcd 1 and positive denominator, exact arithmetic and comparisons):

* ``gmpy2.mpq`` — compiled, roughly an order of magnitude faster; the default.
* ``fractions.Fraction`` — stdlib pure-Python fallback, selected when gmpy2 is
  missing or ``CTCSIM_PURE_PYTHON=1`` is set.

No floating point ever enters the semantics; parsing rejects floats.
"""

import os
from fractions import Fraction

if os.environ.get("CTCSIM_PURE_PYTHON") == "1":
    RAT = Fraction
    BACKEND = "fraction"
else:
    try:
        from gmpy2 import mpq as RAT
        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - gmpy2 is an optional extra
        RAT = Fraction
        BACKEND = "fraction"

ZERO = RAT(0)
ONE = RAT(1)
HALF = RAT(1, 2)
TWO_THIRDS = RAT(2, 3)


def rat(num, den=None):
    """Build a rational from ints or a "num/den" string; floats are rejected."""
    if isinstance(num, float) or isinstance(den, float):
        raise TypeError("floats are not allowed; use ints or 'num/den' strings")
    if den is not None:
        return RAT(num, den)
    if isinstance(num, str):
        text = num.strip()
        if "/" in text:
            n, _, d = text.partition("/")
            return RAT(int(n), int(d))
        return RAT(int(text))
    return RAT(num)


def rat_str(value) -> str:
    """Serialize exactly as "num/den" (or "num" for integers)."""
    n, d = value.numerator, value.denominator
    return f"{n}" if d == 1 else f"{n}/{d}"


def is_probability(value) -> bool:
    return ZERO <= value <= ONE
