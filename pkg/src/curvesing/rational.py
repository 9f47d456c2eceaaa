"""Exact rational scalars.

Coefficients are ``gmpy2.mpq`` when gmpy2 is importable, otherwise
``fractions.Fraction``.  Set ``CURVESING_PURE_PYTHON=1`` to force the
stdlib backend (used by the benchmark and by the backend-parity tests).
"""

import os
from fractions import Fraction
from math import gcd as zgcd

BACKEND = "fraction"
QQ = Fraction
ZZ = int

if os.environ.get("CURVESING_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from gmpy2 import gcd as zgcd  # noqa: F811
        from gmpy2 import mpq as QQ  # noqa: F811
        from gmpy2 import mpz as ZZ  # noqa: F811

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover
        pass

ZERO = QQ(0)
ONE = QQ(1)


def to_rational(value):
    """Coerce an int, str ("a/b"), Fraction or backend rational to ``QQ``."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction) and QQ is not Fraction:
        return QQ(value.numerator, value.denominator)
    return QQ(value)


def format_rational(c):
    """Canonical text: ``"a"`` for integers, ``"a/b"`` otherwise."""
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"
