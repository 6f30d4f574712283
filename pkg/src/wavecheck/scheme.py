"""Second-order centered explicit scheme and its Courant-number guard.

The binary64 path reproduces the reference C loop operation for operation:

    a1 = dt/dx*v;  a = a1*a1;
    dp = p[i+1][k] - 2.*p[i][k] + p[i-1][k];
    p[i][1]   = p[i][0] + 0.5*a*dp;
    p[i][k+1] = 2.*p[i][k] - p[i][k-1] + a*dp;

Each Python expression below mirrors that evaluation order (left to right,
``dp`` materialized, no fused multiply-add), so round-off measurements made
against this solver are measurements of that operation schedule.  The exact
path runs the same recurrences in rational arithmetic, where the order is
immaterial.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    CflViolationError,
    NonFiniteError,
    ParameterError,
    ShapeError,
)
from .grid import Field, Grid, apply_Ah, build_grid, check_vector
from .problem import SpaceFunction, WaveProblem
from .scalars import BINARY64, EXACT, Scalar, to_fraction, zero

#: Default Courant margin; the reference program is specified down to this value.
DEFAULT_XI = 2.0 ** -50

__all__ = [
    "DEFAULT_XI",
    "CflReport",
    "SchemeRun",
    "apply_Ah",
    "check_cfl",
    "courant_number",
    "solve",
]


@dataclass(frozen=True)
class CflReport:
    cn: Scalar
    xi: float
    satisfied: bool


def courant_number(c, g: Grid) -> Scalar:
    """``c dt / dx`` in the grid's scalar kind (binary64: ``dt/dx*c``)."""
    if not float(c) > 0:
        raise ParameterError(f"velocity must be positive, got {c}")
    if g.kind == BINARY64:
        return (g.dt / g.dx) * float(c)
    return to_fraction(c) * g.dt / g.dx


def check_cfl(c, g: Grid, xi) -> CflReport:
    """Check ``cn <= 1 - xi`` with the comparison done in exact rationals."""
    if not 0 < float(xi) < 1:
        raise ParameterError(f"xi must lie in (0, 1), got {xi}")
    cn = courant_number(c, g)
    satisfied = to_fraction(cn) <= 1 - to_fraction(xi)
    return CflReport(cn=cn, xi=float(xi), satisfied=satisfied)


@dataclass
class SchemeRun:
    """A completed run: the field plus everything needed to audit it."""

    grid: Grid
    problem: WaveProblem
    kind: str
    field: Field
    a: Scalar
    cn: Scalar
    cfl: CflReport
    u0: Sequence
    u1: Optional[Sequence]
    source: Optional[list]

    def value(self, i: int, k: int) -> Scalar:
        return self.field.value(i, k)

    def column(self, k: int) -> Sequence:
        return self.field.column(k)


def _sample_space(data, g: Grid, what: str) -> list:
    """Sample a Cauchy datum on the grid with zero boundary entries."""
    z = zero(g.kind)
    if data is None:
        return [z] * (g.i_max + 1)
    if isinstance(data, SpaceFunction):
        out = [z] * (g.i_max + 1)
        for i in range(1, g.i_max):
            xi = g.x(i)
            out[i] = data.float_eval(xi) if g.kind == BINARY64 else data.exact_eval(xi)
        return out
    check_vector(data, g)
    if data[0] != 0 or data[g.i_max] != 0:
        raise ParameterError(f"sampled {what} must vanish on the boundary")
    if g.kind == BINARY64:
        return [float(v) for v in data]
    return [to_fraction(v) for v in data]


def _sample_source(s, g: Grid) -> Optional[list]:
    """Full source table as per-time-step columns, or None when absent."""
    if s is None:
        return None
    z = zero(g.kind)
    cols = []
    if callable(s):
        for k in range(g.k_max + 1):
            tk = g.t(k)
            col = [z] * (g.i_max + 1)
            for i in range(1, g.i_max):
                v = s(g.x(i), tk)
                col[i] = float(v) if g.kind == BINARY64 else to_fraction(v)
            cols.append(col)
        return cols
    for k in range(g.k_max + 1):
        row = s[k]
        if len(row) != g.i_max + 1:
            raise ShapeError(f"source column {k} has length {len(row)}")
        col = [float(v) for v in row] if g.kind == BINARY64 else [to_fraction(v) for v in row]
        cols.append(col)
    return cols


def solve(p: WaveProblem, g: Grid, kind: str | None = None,
          xi=DEFAULT_XI, enforce_cfl: bool = True) -> SchemeRun:
    """March the explicit scheme over the whole grid.

    The run refuses to start when the Courant margin fails, unless
    ``enforce_cfl=False`` downgrades the refusal to a warning (the stability
    and error bounds all presuppose the margin).  binary64 runs abort on the
    first non-finite value.
    """
    if kind is None:
        kind = g.kind
    if kind != g.kind:
        g = build_grid(g.x_min, g.x_max, g.t_max, g.i_max, g.k_max, kind)
    report = check_cfl(p.c, g, xi)
    if not report.satisfied:
        msg = f"Courant number {report.cn} exceeds 1 - xi = 1 - {xi}"
        if enforce_cfl:
            raise CflViolationError(msg)
        warnings.warn(msg, stacklevel=2)

    u0 = _sample_space(p.u0, g, "u0")
    u1 = _sample_space(p.u1, g, "u1") if p.u1 is not None else None
    source = _sample_source(p.s, g)

    if g.kind == BINARY64:
        c = float(p.c)
        a1 = (g.dt / g.dx) * c
        a = a1 * a1
        cols = _march_binary64(g, a, u0, u1, source)
        cn: Scalar = a1
    else:
        cn = to_fraction(p.c) * g.dt / g.dx
        a = cn * cn
        cols = _march_exact(g, a, u0, u1, source)

    field = Field.from_columns(cols, g.kind)
    return SchemeRun(grid=g, problem=p, kind=g.kind, field=field, a=a, cn=cn,
                     cfl=report, u0=u0, u1=u1, source=source)


def _march_binary64(g: Grid, a: float, u0, u1, source) -> list:
    imax = g.i_max
    dt = g.dt
    ha = 0.5 * a
    dt2 = dt * dt
    cols = [list(map(float, u0))]

    prev = cols[0]
    col = [0.0] * (imax + 1)
    for i in range(1, imax):
        dp = (prev[i + 1] - 2.0 * prev[i]) + prev[i - 1]
        if u1 is None:
            col[i] = prev[i] + ha * dp
        else:
            col[i] = (prev[i] + dt * u1[i]) + ha * dp
    _abort_on_nonfinite(col, 1)
    cols.append(col)

    for k in range(1, g.k_max):
        pk = cols[k]
        pkm1 = cols[k - 1]
        nxt = [0.0] * (imax + 1)
        if source is None:
            for i in range(1, imax):
                dp = (pk[i + 1] - 2.0 * pk[i]) + pk[i - 1]
                nxt[i] = (2.0 * pk[i] - pkm1[i]) + a * dp
        else:
            sk = source[k]
            for i in range(1, imax):
                dp = (pk[i + 1] - 2.0 * pk[i]) + pk[i - 1]
                nxt[i] = ((2.0 * pk[i] - pkm1[i]) + a * dp) + dt2 * sk[i]
        _abort_on_nonfinite(nxt, k + 1)
        cols.append(nxt)
    return cols


def _march_exact(g: Grid, a: Fraction, u0, u1, source) -> list:
    imax = g.i_max
    half_a = a / 2
    dt = g.dt
    dt2 = dt * dt
    z = Fraction(0)
    cols = [list(u0)]

    prev = cols[0]
    col = [z] * (imax + 1)
    for i in range(1, imax):
        dp = (prev[i + 1] - 2 * prev[i]) + prev[i - 1]
        col[i] = prev[i] + half_a * dp
        if u1 is not None:
            col[i] += dt * u1[i]
    cols.append(col)

    for k in range(1, g.k_max):
        pk = cols[k]
        pkm1 = cols[k - 1]
        nxt = [z] * (imax + 1)
        for i in range(1, imax):
            dp = (pk[i + 1] - 2 * pk[i]) + pk[i - 1]
            nxt[i] = 2 * pk[i] - pkm1[i] + a * dp
            if source is not None:
                nxt[i] += dt2 * source[k][i]
        cols.append(nxt)
    return cols


def _abort_on_nonfinite(col: list, k: int) -> None:
    for i, v in enumerate(col):
        if not math.isfinite(v):
            raise NonFiniteError(i, k)
