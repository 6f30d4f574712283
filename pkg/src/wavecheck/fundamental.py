"""Discrete fundamental solution of the scheme and its combinatorial identities.

Everything here is exact: rationals for the triangular table, big integers
for the binomial identities.  No floating point enters this module -- these
are algebraic identities, and a tolerance would only mask defects.

The table stores the time-shifted sequence ``L`` with ``L_i^{-1} = 0``,
``L_0^0 = 1`` and the three-term recurrence

    L_i^{k+1} = a (L_{i-1}^k + L_{i+1}^k) + 2 (1 - a) L_i^k - L_i^{k-1}.

The fundamental solution proper (unit impulse in the second Cauchy datum)
is the shift ``lam(i, k) = L(i, k-1)``; row sums of ``lam`` grow linearly
and the entries vanish outside the light cone ``|i| < k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ParameterError
from .scalars import to_fraction


def comb0(m: int, r: int) -> int:
    """Binomial coefficient that vanishes outside ``0 <= r <= m``."""
    if m < 0 or r < 0 or r > m:
        return 0
    return math.comb(m, r)


class FundamentalTable:
    """Triangular table of ``L_i^k`` for ``|i| <= k <= K`` in exact rationals.

    Internally row k is stored as integers scaled by ``q**k`` where
    ``a = p/q`` in lowest terms; the recurrence then runs in pure integer
    arithmetic (no gcd per step), and entries materialize as Fractions on
    access.
    """

    def __init__(self, a: Fraction, K: int, rows: list[list[int]]):
        self.a = a
        self.K = K
        self._rows = rows
        self._q = a.denominator

    def entry(self, i: int, k: int) -> Fraction:
        """``L_i^k``; zero outside the triangle and on the fictitious row -1."""
        if k == -1:
            return Fraction(0)
        if not 0 <= k <= self.K:
            raise DomainError(f"time index {k} outside [0, {self.K}]")
        if abs(i) > k:
            return Fraction(0)
        return Fraction(self._rows[k][i + k], self._q ** k)

    def lam(self, i: int, k: int) -> Fraction:
        """Fundamental-solution value: the table shifted one step in time."""
        if k < 0:
            raise DomainError(f"negative time index {k}")
        return self.entry(i, k - 1)

    def row_total(self, k: int) -> Fraction:
        """Sum of row k of ``L`` (satisfies a second-difference-zero recurrence)."""
        if not 0 <= k <= self.K:
            raise DomainError(f"time index {k} outside [0, {self.K}]")
        return Fraction(sum(self._rows[k]), self._q ** k)

    def all_nonnegative(self) -> bool:
        return all(v >= 0 for row in self._rows for v in row)

    def is_symmetric(self) -> bool:
        return all(row == row[::-1] for row in self._rows)


def build_table(a, K: int) -> FundamentalTable:
    """Run the three-term recurrence up to time index K."""
    a = to_fraction(a)
    if not 0 < a < 1:
        raise ParameterError(f"a must lie in (0, 1), got {a}")
    if K < 0:
        raise ParameterError(f"table depth must be nonnegative, got {K}")
    p, q = a.numerator, a.denominator
    two_q_minus_p = 2 * (q - p)
    q2 = q * q

    rows: list[list[int]] = [[1]]
    if K == 0:
        return FundamentalTable(a, K, rows)
    rows.append([p, two_q_minus_p, p])
    for k in range(1, K):
        cur = rows[k]
        prev = rows[k - 1]
        width = 2 * (k + 1) + 1

        def at(row: list[int], off: int, i: int) -> int:
            idx = i + off
            return row[idx] if 0 <= idx < len(row) else 0

        nxt = [0] * width
        for i in range(-(k + 1), k + 2):
            acc = p * (at(cur, k, i - 1) + at(cur, k, i + 1)) + two_q_minus_p * at(cur, k, i)
            acc -= q2 * at(prev, k - 1, i)
            nxt[i + k + 1] = acc
        rows.append(nxt)
    return FundamentalTable(a, K, rows)


def row_sum(table: FundamentalTable, k: int) -> Fraction:
    """``sigma^k = sum_i lam(i, k)``; the linear-growth law says this equals k."""
    if not 0 <= k <= table.K + 1:
        raise DomainError(f"row-sum index {k} outside [0, {table.K + 1}]")
    if k == 0:
        return Fraction(0)
    return table.row_total(k - 1)


def lambda_closed_form(a, i: int, k: int) -> Fraction:
    """Closed form of the table entry as an alternating binomial sum in a."""
    a = to_fraction(a)
    if abs(i) > k:
        raise DomainError(f"(i={i}, k={k}) outside the triangle |i| <= k")
    total = Fraction(0)
    a_pow = a ** abs(i)
    for n in range(abs(i), k + 1):
        term = math.comb(2 * n, n + i) * math.comb(n + k + 1, 2 * n + 1)
        total += (-1) ** (n + i) * term * a_pow
        a_pow *= a
    return total


def jacobi_poly(n: int, alpha: int, beta: int, x) -> Fraction:
    """Jacobi polynomial ``P_n^(alpha,beta)(x)`` from its binomial definition.

    Exact for rational x; integer parameters must exceed -1.
    """
    if not (isinstance(alpha, int) and isinstance(beta, int)):
        raise ParameterError("alpha and beta must be integers here")
    if alpha <= -1 or beta <= -1:
        raise ParameterError(f"need alpha, beta > -1, got ({alpha}, {beta})")
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    x = to_fraction(x)
    plus = (x + 1) / 2
    minus = (x - 1) / 2
    total = Fraction(0)
    for p in range(n + 1):
        total += (
            math.comb(n + alpha, p) * math.comb(n + beta, n - p)
            * plus ** p * minus ** (n - p)
        )
    return total


def lambda_via_jacobi(a, i: int, k: int) -> Fraction:
    """Table entry as ``a^|i|`` times a partial sum of Jacobi polynomials.

    At ``i = 0`` the summands are Legendre polynomials; nonnegativity of such
    partial sums on (0, 1) is what makes the fundamental solution positive.
    """
    a = to_fraction(a)
    if abs(i) > k:
        raise DomainError(f"(i={i}, k={k}) outside the triangle |i| <= k")
    arg = 1 - 2 * a
    ai = abs(i)
    total = Fraction(0)
    for n in range(k - ai + 1):
        total += jacobi_poly(n, 2 * ai, 0, arg)
    return a ** ai * total


# --- hypergeometric summand and the telescoping certificate -----------------


def summand(i: int, n: int, k: int, p: int) -> int:
    """``F(i, n, k; p)``: the hypergeometric summand, zero outside ``i<=p<=n``."""
    return comb0(k + i, p + i) * comb0(k - i, p - i) * comb0(k - p, n - p)


def brute_sum(i: int, n: int, k: int) -> int:
    """``f(i, n, k) = sum_p F(i, n, k; p)`` by direct enumeration."""
    lo = min(i, 0)
    hi = max(n, 0)
    return sum(summand(i, n, k, p) for p in range(lo, hi + 1))


def _require_ordered(i: int, n: int, k: int) -> None:
    if not 0 <= i <= n <= k:
        raise DomainError(f"need 0 <= i <= n <= k, got ({i}, {n}, {k})")


def check_binomial_identity(i: int, n: int, k: int) -> bool:
    """Exact equality of the single-sum and double-sum binomial identities.

    Single sum: ``f(i, n, k) = C(2n, n+i) C(k+n, 2n)``.
    Double sum (its column summation): the same left side summed over the
    upper index equals ``C(2n, n+i) C(n+k+1, 2n+1)``.
    """
    _require_ordered(i, n, k)
    single = brute_sum(i, n, k) == math.comb(2 * n, n + i) * math.comb(k + n, 2 * n)
    double_lhs = 0
    for p in range(i, n + 1):
        for q in range(n, k + 1):
            double_lhs += comb0(q + i, p + i) * comb0(q - i, p - i) * comb0(q - p, n - p)
    double = double_lhs == math.comb(2 * n, n + i) * math.comb(n + k + 1, 2 * n + 1)
    return single and double


def check_zeilberger_recurrences(i: int, n: int, k: int) -> bool:
    """The three first-order shift recurrences of ``f``, checked on brute force.

    ``(n+1+i) f(i+1,n,k) = (n-i) f(i,n,k)``
    ``(n+1+i)(n+1-i) f(i,n+1,k) = (k+1+n)(k-n) f(i,n,k)``
    ``(k+1-n) f(i,n,k+1) = (k+1+n) f(i,n,k)``
    """
    _require_ordered(i, n, k)
    f = brute_sum(i, n, k)
    ok_i = (n + 1 + i) * brute_sum(i + 1, n, k) == (n - i) * f
    ok_n = (n + 1 + i) * (n + 1 - i) * brute_sum(i, n + 1, k) == (k + 1 + n) * (k - n) * f
    ok_k = (k + 1 - n) * brute_sum(i, n, k + 1) == (k + 1 + n) * f
    return ok_i and ok_n and ok_k


def _rat_i(i: int, n: int, k: int, p: int) -> Fraction:
    return Fraction((1 + 2 * i) * (p - i), k - i)


def _rat_n(i: int, n: int, k: int, p: int) -> Fraction:
    return Fraction((k - n) * (p + i) * (p - i), n + 1 - p)


def _rat_k(i: int, n: int, k: int, p: int) -> Fraction:
    return Fraction((p + i) * (p - i), k + 1 - p)


_CERTIFICATE = {
    "i": {
        "b0": lambda i, n, k: n - i,
        "b1": lambda i, n, k: -(n + 1 + i),
        "rat": _rat_i,
        "shift": lambda i, n, k, p: summand(i + 1, n, k, p),
        "bad_dens": lambda i, n, k, p: ("k - i",) if k == i else (),
    },
    "n": {
        "b0": lambda i, n, k: (k + 1 + n) * (k - n),
        "b1": lambda i, n, k: -(n + 1 + i) * (n + 1 - i),
        "rat": _rat_n,
        "shift": lambda i, n, k, p: summand(i, n + 1, k, p),
        "bad_dens": lambda i, n, k, p: tuple(
            name for name, bad in (("n + 1 - p", p == n + 1), ("n - p", p == n)) if bad
        ),
    },
    "k": {
        "b0": lambda i, n, k: k + 1 + n,
        "b1": lambda i, n, k: -(k + 1 - n),
        "rat": _rat_k,
        "shift": lambda i, n, k, p: summand(i, n, k + 1, p),
        "bad_dens": lambda i, n, k, p: tuple(
            name for name, bad in (("k + 1 - p", p == k + 1), ("k - p", p == k)) if bad
        ),
    },
}


@dataclass
class CertificateResult:
    """Per-variable outcome of the telescoping certificate at one lattice point."""

    point: tuple[int, int, int, int]
    results: dict

    @property
    def ok(self) -> bool:
        return all(v != "violated" for v in self.results.values())

    @property
    def checked(self) -> int:
        return sum(1 for v in self.results.values() if v == "ok")


def check_certificate(i: int, n: int, k: int, p: int) -> CertificateResult:
    """Verify the per-summand telescoping identities at one support point.

    For each shift variable ``l`` the rational-function identity

        b_{l,0} + b_{l,1} (LF/F) = R_l(p+1) (PF/F) - R_l(p)

    is evaluated in exact rational arithmetic.  Configurations that put a
    zero in one of the certificate denominators are skipped with the
    denominator named.
    """
    _require_ordered(i, n, k)
    if not i <= p <= n:
        raise DomainError(f"p={p} outside the summand support [{i}, {n}]")
    base = summand(i, n, k, p)
    results: dict = {}
    for name, cert in _CERTIFICATE.items():
        bad = cert["bad_dens"](i, n, k, p)
        if bad:
            results[name] = f"skipped: zero denominator {', '.join(bad)}"
            continue
        lhs = cert["b0"](i, n, k) + cert["b1"](i, n, k) * Fraction(cert["shift"](i, n, k, p), base)
        rat = cert["rat"]
        rhs = rat(i, n, k, p + 1) * Fraction(summand(i, n, k, p + 1), base) - rat(i, n, k, p)
        results[name] = "ok" if lhs == rhs else "violated"
    return CertificateResult(point=(i, n, k, p), results=results)
