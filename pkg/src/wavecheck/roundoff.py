"""Shadow execution and the full round-off error pipeline.

A shadow run executes the same scheme twice: once in binary64 following the
reference program's operation schedule, once in exact rational arithmetic.
Every binary64 value is a rational, so the global error ``D = computed -
exact`` and the per-update local errors ``d`` are exact rationals, and the
convolution identity tying them together can be checked with zero tolerance.

Sign bookkeeping, fixed once here: the local errors measure *exact update of
computed values minus computed value* (the amount the float fell short), so
their convolution with the fundamental solution reproduces ``exact - computed``.
:func:`reconstruct_global_error` negates the convolution so that its output
matches the stored ``computed - exact`` table entry for entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ParameterError, UnsupportedFeatureError
from .fundamental import FundamentalTable
from .grid import Grid, dot_dx
from .problem import SpaceFunction, WaveProblem, antisym_index
from .scalars import BINARY64, EXACT, to_fraction
from .scheme import DEFAULT_XI, SchemeRun, solve

#: Local round-off bound for one update of the scheme, 78 * 2**-52.
LOCAL_BOUND = Fraction(78, 2 ** 52)

#: Admissible gap between the computed and exact stiffness coefficients.
A_GAP = Fraction(1, 2 ** 49)


@dataclass
class ShadowRun:
    """Paired binary64/exact runs with their error tables (all rationals)."""

    float_run: SchemeRun
    exact_run: SchemeRun
    a_float: float
    a_exact: Fraction
    delta: list       # columns of local errors, (i_max+1) x (k_max+1)
    global_err: list  # columns of computed-minus-exact
    a_gap_ok: bool
    range_ok: bool
    range_violation: Optional[tuple]

    @property
    def grid(self) -> Grid:
        return self.exact_run.grid

    @property
    def i_max(self) -> int:
        return self.exact_run.grid.i_max

    @property
    def k_max(self) -> int:
        return self.exact_run.grid.k_max


def _float_columns_as_fractions(run: SchemeRun) -> list:
    return [[to_fraction(v) for v in run.column(k)]
            for k in range(run.grid.k_max + 1)]


def _second_diff(col, i):
    return (col[i + 1] - 2 * col[i]) + col[i - 1]


def _local_error_table(fl_cols: list, exact_col0: list, a: Fraction) -> list:
    """Local errors per the update definitions; outer arithmetic exact."""
    imax = len(fl_cols[0]) - 1
    kmax = len(fl_cols) - 1
    z = Fraction(0)
    half_a = a / 2

    d0 = [z] * (imax + 1)
    for i in range(1, imax):
        d0[i] = exact_col0[i] - fl_cols[0][i]

    d1 = [z] * (imax + 1)
    for i in range(1, imax):
        ideal = fl_cols[0][i] + half_a * _second_diff(fl_cols[0], i)
        inherited = d0[i] + half_a * _second_diff(d0, i)
        d1[i] = ideal - fl_cols[1][i] - inherited

    cols = [d0, d1]
    for k in range(1, kmax):
        dk = [z] * (imax + 1)
        pk, pkm1, pk1 = fl_cols[k], fl_cols[k - 1], fl_cols[k + 1]
        for i in range(1, imax):
            ideal = 2 * pk[i] - pkm1[i] + a * _second_diff(pk, i)
            dk[i] = ideal - pk1[i]
        cols.append(dk)
    return cols


def shadow_solve(p: WaveProblem, g: Grid, xi: float = DEFAULT_XI) -> ShadowRun:
    """Run both scalar kinds and measure the error tables.

    Requires zero second datum and zero source (the program's assumptions)
    and a first datum with an exact rational evaluation, so that the exact
    run is the true real-arithmetic solution.
    """
    if p.u1 is not None or p.s is not None:
        raise UnsupportedFeatureError(
            "shadow runs assume u1 = 0 and s = 0, as the reference program does"
        )
    if isinstance(p.u0, SpaceFunction) and not p.u0.exactly_evaluable:
        raise UnsupportedFeatureError(
            "shadow runs need a first datum evaluable in exact rationals "
            "(e.g. a polynomial)"
        )
    float_run = solve(p, g, kind=BINARY64, xi=xi)
    exact_run = solve(p, g, kind=EXACT, xi=xi)
    a_exact = exact_run.a
    a_float = float_run.a
    a_gap_ok = abs(to_fraction(a_float) - a_exact) <= A_GAP

    fl_cols = _float_columns_as_fractions(float_run)
    ex_cols = [exact_run.column(k) for k in range(g.k_max + 1)]
    global_err = [[fl_cols[k][i] - ex_cols[k][i] for i in range(g.i_max + 1)]
                  for k in range(g.k_max + 1)]
    delta = _local_error_table(fl_cols, ex_cols[0], a_exact)

    range_ok = True
    range_violation = None
    for k in range(g.k_max + 1):
        col = float_run.column(k)
        for i in range(g.i_max + 1):
            if not -2.0 <= col[i] <= 2.0:
                range_ok = False
                range_violation = (i, k, col[i])
                break
        if not range_ok:
            break

    return ShadowRun(
        float_run=float_run, exact_run=exact_run,
        a_float=a_float, a_exact=a_exact,
        delta=delta, global_err=global_err,
        a_gap_ok=a_gap_ok, range_ok=range_ok, range_violation=range_violation,
    )


def local_errors(run: ShadowRun) -> list:
    """Recompute the local-error table from the stored runs (pure function)."""
    fl_cols = _float_columns_as_fractions(run.float_run)
    return _local_error_table(fl_cols, run.exact_run.column(0), run.a_exact)


def max_abs_delta(run: ShadowRun) -> Fraction:
    return max((abs(v) for col in run.delta for v in col), default=Fraction(0))


def reconstruct_global_error(delta: list, table: FundamentalTable, i_max: int) -> list:
    """Global error from the convolution of extended local errors.

    ``R_i^k = - sum_{l=0}^{k} sum_{j=-l}^{l} d~_{i-j}^{k-l} L_j^l`` where
    ``d~`` is the odd spatial extension of each local-error row and ``L`` is
    the time-shifted fundamental solution; the leading sign converts the
    convolution's exact-minus-computed orientation into the stored
    computed-minus-exact one.  The result must equal the measured table
    exactly.
    """
    k_max = len(delta) - 1
    if table.K < k_max:
        raise ParameterError(
            f"fundamental table depth {table.K} insufficient for k_max {k_max}"
        )
    lam_rows = [
        [table.entry(j, l) for j in range(-l, l + 1)] for l in range(k_max + 1)
    ]
    out = []
    for k in range(k_max + 1):
        col = [Fraction(0)] * (i_max + 1)
        for i in range(i_max + 1):
            acc = Fraction(0)
            for l in range(k + 1):
                drow = delta[k - l]
                lrow = lam_rows[l]
                for j in range(-l, l + 1):
                    w = lrow[j + l]
                    if w:
                        d = antisym_index(drow, i - j)
                        if d:
                            acc += d * w
            col[i] = -acc
        out.append(col)
    return out


GLOBAL_BOUND_SCALE = Fraction(78, 2 ** 53)


@dataclass
class GlobalBoundReport:
    ok: bool
    max_ratio: float
    max_ratio_exact: Fraction
    worst_node: Optional[tuple]
    norm_level_ok: Optional[bool]
    violations: list


def check_global_bound(run: ShadowRun) -> GlobalBoundReport:
    """Node-wise ``|D_i^k| <= 78 * 2^-53 (k+1)(k+2)``, plus the norm-level form.

    Violations are findings (collected, not raised); the max ratio of error
    to bound is reported for regression tracking.
    """
    g = run.grid
    best = Fraction(0)
    worst = None
    violations = []
    for k in range(g.k_max + 1):
        bound = GLOBAL_BOUND_SCALE * (k + 1) * (k + 2)
        for i in range(g.i_max + 1):
            v = abs(run.global_err[k][i])
            if v > bound:
                violations.append((i, k))
            ratio = v / bound
            if ratio > best:
                best = ratio
                worst = (i, k)

    norm_level_ok: Optional[bool] = None
    if g.dx <= 1 and g.dt <= g.t_max / 2:
        span = g.x_max - g.x_min
        scale = Fraction(234, 2 ** 53) * g.k_max ** 2
        limit_sq = (span + 1) * scale * scale
        norm_level_ok = all(
            dot_dx(run.global_err[k], run.global_err[k], g) <= limit_sq
            for k in range(g.k_max + 1)
        )

    return GlobalBoundReport(
        ok=not violations,
        max_ratio=float(best),
        max_ratio_exact=best,
        worst_node=worst,
        norm_level_ok=norm_level_ok,
        violations=violations,
    )


@dataclass
class RangeReport:
    in_range: bool
    violation: Optional[tuple]
    max_abs: float
    decomposition_ok: Optional[bool]


def check_range(run: ShadowRun) -> RangeReport:
    """Computed values stay in [-2, 2]; optional exact decomposition check.

    When an exactly evaluable reference is attached, verifies at every node
    that computed = reference + signed method error + round-off error, an
    identity that ties the three error tables together.
    """
    max_abs = max(
        abs(run.float_run.value(i, k))
        for k in range(run.k_max + 1) for i in range(run.i_max + 1)
    )
    decomposition_ok: Optional[bool] = None
    ref = run.float_run.problem.reference
    if ref is not None:
        g = run.grid
        decomposition_ok = True
        for k in range(g.k_max + 1):
            tk = g.t(k)
            for i in range(g.i_max + 1):
                ref_v = ref.value(g.x(i), tk)
                computed = to_fraction(run.float_run.value(i, k))
                e_signed = run.exact_run.value(i, k) - ref_v
                if computed - ref_v != e_signed + run.global_err[k][i]:
                    decomposition_ok = False
                    break
            if not decomposition_ok:
                break
    return RangeReport(
        in_range=run.range_ok,
        violation=run.range_violation,
        max_abs=float(max_abs),
        decomposition_ok=decomposition_ok,
    )
