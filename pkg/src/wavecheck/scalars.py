"""Scalar-kind machinery.

Every numeric operation in the package is parameterized by a scalar kind:

* ``"binary64"`` -- IEEE-754 double precision, round-to-nearest-even, no
  fused multiply-add.  Python floats provide exactly this on CPython.
* ``"exact"`` -- arbitrary-precision rationals (:class:`fractions.Fraction`).
  The update rules of the solver use only +, -, *, so rational arithmetic
  reproduces the ideal real-number run bit for bit.

Exact square roots do not stay rational, so comparisons involving square
roots of rationals are decided with certified integer-square-root interval
bounds (:func:`sqrt_bounds`, :func:`certified_sqrt_leq`) instead of floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from .errors import NumericDomainError, ParameterError

Scalar = Union[float, Fraction]

BINARY64 = "binary64"
EXACT = "exact"
KINDS = (BINARY64, EXACT)

#: Unit round-off of binary64, 2**-53.
EPS64 = 2.0 ** -53


def ensure_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ParameterError(f"unknown scalar kind {kind!r}; expected one of {KINDS}")
    return kind


def to_fraction(x) -> Fraction:
    """Exact conversion to a rational; floats convert to their exact value."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def convert(x, kind: str) -> Scalar:
    """Coerce ``x`` into the requested scalar kind."""
    if kind == BINARY64:
        return float(x)
    if kind == EXACT:
        return to_fraction(x)
    raise ParameterError(f"unknown scalar kind {kind!r}")


def zero(kind: str) -> Scalar:
    return 0.0 if kind == BINARY64 else Fraction(0)


def sqrt_bounds(x: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational enclosure ``lo <= sqrt(x) <= hi`` with ``hi - lo <= 2**-bits / q``.

    Uses ``isqrt(p*q*4**bits)`` on ``x = p/q``, so both bounds are exact
    rationals and the enclosure is certified, not heuristic.
    """
    x = to_fraction(x)
    if x < 0:
        raise NumericDomainError(f"square root of negative rational {x}")
    p, q = x.numerator, x.denominator
    scaled = p * q << (2 * bits)
    s = math.isqrt(scaled)
    den = q << bits
    lo = Fraction(s, den)
    hi = lo if s * s == scaled else Fraction(s + 1, den)
    return lo, hi


def certified_sqrt_leq(
    lhs: Fraction,
    rhs_terms: Sequence[Fraction],
    max_bits: int = 512,
) -> bool:
    """Decide ``sqrt(lhs) <= sum_j sqrt(rhs_terms[j])`` exactly.

    All inputs are nonnegative rationals.  The comparison escalates the
    enclosure precision until it resolves; ties (true equality) are handled
    by rational shortcuts before giving up.
    """
    lhs = to_fraction(lhs)
    terms = [to_fraction(t) for t in rhs_terms if t != 0]
    if lhs < 0 or any(t < 0 for t in terms):
        raise NumericDomainError("sqrt comparison needs nonnegative radicands")
    if lhs == 0:
        return True
    if not terms:
        return False
    if len(terms) == 1:
        # sqrt is monotone: single-term case is a plain rational comparison.
        return lhs <= terms[0]
    bits = 32
    while bits <= max_bits:
        _, lhs_hi = sqrt_bounds(lhs, bits)
        lhs_lo, _ = sqrt_bounds(lhs, bits)
        rhs_lo = sum(sqrt_bounds(t, bits)[0] for t in terms)
        rhs_hi = sum(sqrt_bounds(t, bits)[1] for t in terms)
        if lhs_hi <= rhs_lo:
            return True
        if lhs_lo > rhs_hi:
            return False
        bits *= 2
    raise NumericDomainError(
        "sqrt comparison undecided at maximum precision; operands may be equal "
        "in a form the rational shortcuts do not recognize"
    )


def scalar_json(v):
    """JSON-ready form: rationals as 'p/q' strings, binary64 with a lossless hex twin."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return {"decimal": v, "hex": v.hex()}
    return v


def parse_scalar(text: str) -> Scalar:
    """Inverse of the CSV cell forms: 'p/q', hex float literals, or decimals."""
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    if text.startswith(("0x", "-0x")):
        return float.fromhex(text)
    return float(text)
