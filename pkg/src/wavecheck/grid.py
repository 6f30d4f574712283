"""Discretization geometry: uniform grid, index maps, discrete dot products.

The interior dot product ``<q, r> = sum_{i=1}^{i_max-1} q_i r_i dx`` is the
measure every error norm in the package is expressed in.  For vectors that
vanish on the boundary it coincides with the inclusive sum over all nodes,
which is the form some derived bounds are stated in; the test suite pins
that equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericDomainError, ParameterError, ShapeError
from .scalars import BINARY64, EXACT, Scalar, convert, ensure_kind, zero


@dataclass(frozen=True)
class Grid:
    """Uniform space-time grid on ``[x_min, x_max] x [0, t_max]``.

    ``dx`` and ``dt`` carry the grid's scalar kind: binary64 grids hold the
    rounded quotients the reference program would compute (``span/i_max``,
    ``t_max/k_max`` in double precision), exact grids hold the true rationals.
    """

    x_min: Scalar
    x_max: Scalar
    t_max: Scalar
    i_max: int
    k_max: int
    dx: Scalar
    dt: Scalar
    kind: str

    def x(self, i: int) -> Scalar:
        return self.x_min + i * self.dx

    def t(self, k: int) -> Scalar:
        return k * self.dt

    def x_nodes(self) -> list:
        return [self.x(i) for i in range(self.i_max + 1)]

    @property
    def span(self) -> Scalar:
        return self.x_max - self.x_min


def build_grid(x_min, x_max, t_max, i_max: int, k_max: int, kind: str = BINARY64) -> Grid:
    """Construct a grid, validating the program preconditions.

    Interval counts must be greater than one; the domain must be nonempty.
    """
    ensure_kind(kind)
    if not isinstance(i_max, int) or not isinstance(k_max, int):
        raise ParameterError("i_max and k_max must be integers")
    if i_max < 2:
        raise ParameterError(f"i_max too small: {i_max} (must be greater than one)")
    if k_max < 2:
        raise ParameterError(f"k_max too small: {k_max} (must be greater than one)")
    x_min = convert(x_min, kind)
    x_max = convert(x_max, kind)
    t_max = convert(t_max, kind)
    if not x_min < x_max:
        raise ParameterError(f"empty space domain: x_min={x_min} >= x_max={x_max}")
    if not t_max > 0:
        raise ParameterError(f"empty time domain: t_max={t_max}")
    span = x_max - x_min
    dx = span / i_max
    dt = t_max / k_max
    return Grid(x_min, x_max, t_max, i_max, k_max, dx, dt, kind)


def space_index(g: Grid, x) -> int:
    """Floor index of ``x`` on the space axis, clamped into ``[0, i_max]``.

    The clamp makes the right endpoint map to the last index even when the
    binary64 quotient rounds just above it.
    """
    x = convert(x, g.kind)
    if x < g.x_min or x > g.x_max:
        raise DomainError(f"x={x} outside [{g.x_min}, {g.x_max}]")
    idx = math.floor((x - g.x_min) / g.dx)
    return min(max(idx, 0), g.i_max)


def time_index(g: Grid, t) -> int:
    """Floor index of ``t`` on the time axis, clamped into ``[0, k_max]``."""
    t = convert(t, g.kind)
    if t < 0 or t > g.t_max:
        raise DomainError(f"t={t} outside [0, {g.t_max}]")
    idx = math.floor(t / g.dt)
    return min(max(idx, 0), g.k_max)


def check_vector(q: Sequence, g: Grid) -> None:
    if len(q) != g.i_max + 1:
        raise ShapeError(f"vector length {len(q)} != i_max+1 = {g.i_max + 1}")


def dot_dx(q: Sequence, r: Sequence, g: Grid) -> Scalar:
    """Interior dot product ``sum_{i=1}^{i_max-1} q_i r_i dx``.

    binary64 grids accumulate the products left to right and apply the final
    ``dx`` scaling once; exact grids are order-independent by construction.
    """
    check_vector(q, g)
    check_vector(r, g)
    if g.kind == BINARY64:
        acc = 0.0
        for i in range(1, g.i_max):
            acc += float(q[i]) * float(r[i])
        return acc * g.dx
    acc = Fraction(0)
    for i in range(1, g.i_max):
        acc += q[i] * r[i]
    return acc * g.dx


def norm_dx(q: Sequence, g: Grid) -> float:
    """``sqrt(<q, q>)`` as a float; exact pipelines should square via dot_dx."""
    return math.sqrt(float(dot_dx(q, q, g)))


def apply_Ah(c, g: Grid, q: Sequence):
    """Discrete analog of ``-c^2 d^2/dx^2``: second-difference stencil.

    Interior entries are ``-c^2 (q_{i+1} - 2 q_i + q_{i-1}) / dx^2``; the
    boundary entries are set to zero (they are only ever read at interior
    indices).
    """
    check_vector(q, g)
    c = convert(c, g.kind)
    if not c > 0:
        raise ParameterError(f"propagation velocity must be positive, got {c}")
    if g.kind == BINARY64:
        c2 = c * c
        dx2 = g.dx * g.dx
        out = [0.0] * (g.i_max + 1)
        for i in range(1, g.i_max):
            d2 = (float(q[i + 1]) - 2.0 * float(q[i])) + float(q[i - 1])
            out[i] = -(c2 * d2) / dx2
        return out
    c2 = c * c
    dx2 = g.dx * g.dx
    out = [Fraction(0)] * (g.i_max + 1)
    for i in range(1, g.i_max):
        d2 = (q[i + 1] - 2 * q[i]) + q[i - 1]
        out[i] = -(c2 * d2) / dx2
    return out


def dot_Ah(q: Sequence, r: Sequence, g: Grid, c) -> Scalar:
    """``<A_h q, r>`` in the interior dot product."""
    return dot_dx(apply_Ah(c, g, q), r, g)


def seminorm_Ah(q: Sequence, g: Grid, c) -> float:
    """``sqrt(<A_h q, q>)``; defined only when the quadratic form is >= 0."""
    v = dot_Ah(q, q, g, c)
    if v < 0:
        if g.kind == EXACT or float(v) < -1e-9:
            raise NumericDomainError(f"A_h quadratic form negative: {v}")
        v = 0.0
    return math.sqrt(float(v))


class Field:
    """Space-time table of scalars, ``(i_max+1) x (k_max+1)``.

    binary64 fields wrap a numpy array indexed ``[i, k]``; exact fields store
    a list of per-time-step columns of rationals.  Solver-produced fields keep
    rows 0 and i_max identically zero.
    """

    def __init__(self, kind: str, *, array: np.ndarray | None = None,
                 columns: list | None = None):
        ensure_kind(kind)
        self.kind = kind
        if kind == BINARY64:
            if array is None:
                raise ParameterError("binary64 field needs an array")
            self._array = array
            self._columns = None
            self.i_max = array.shape[0] - 1
            self.k_max = array.shape[1] - 1
        else:
            if columns is None:
                raise ParameterError("exact field needs columns")
            self._columns = columns
            self._array = None
            self.i_max = len(columns[0]) - 1
            self.k_max = len(columns) - 1

    @classmethod
    def from_columns(cls, columns: list, kind: str) -> "Field":
        if kind == BINARY64:
            return cls(kind, array=np.array(columns, dtype=np.float64).T)
        return cls(kind, columns=[list(col) for col in columns])

    def value(self, i: int, k: int) -> Scalar:
        if self._array is not None:
            return float(self._array[i, k])
        return self._columns[k][i]

    def column(self, k: int) -> Sequence:
        if self._array is not None:
            return self._array[:, k]
        return self._columns[k]

    def columns(self):
        for k in range(self.k_max + 1):
            yield self.column(k)

    @property
    def array(self) -> np.ndarray:
        """binary64 view of the table (lossy for exact fields)."""
        if self._array is not None:
            return self._array
        return np.array([[float(v) for v in col] for col in self._columns]).T

    def max_abs(self) -> Scalar:
        if self._array is not None:
            return float(np.max(np.abs(self._array)))
        best = Fraction(0)
        for col in self._columns:
            for v in col:
                if abs(v) > best:
                    best = abs(v)
        return best
