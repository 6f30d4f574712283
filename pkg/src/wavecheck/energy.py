"""Discrete energy at half time steps, its lower bound, and the stability estimate.

``E^{k+1/2} = 1/2 ||(p^{k+1}-p^k)/dt||^2 + 1/2 <p^k, p^{k+1}>_{A_h}``

With an inactive source the series is constant -- exactly so in rational
arithmetic, which is what the acceptance suite pins.  The stability estimate
``sqrt(E^{k+1/2}) <= C1 + C2 dt sum_k' ||s^k'||`` is validated with certified
rational square-root comparisons so that "holds" means holds, not "holds up
to float noise".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, ParameterError
from .grid import dot_Ah, dot_dx
from .scalars import BINARY64, EXACT, Scalar, certified_sqrt_leq, to_fraction
from .scheme import SchemeRun


def discrete_energy(run: SchemeRun, k: int) -> Scalar:
    """Energy at half step ``k + 1/2``; needs both columns ``k`` and ``k+1``."""
    if not 0 <= k <= run.grid.k_max - 1:
        raise DomainError(f"half-step index {k} outside [0, {run.grid.k_max - 1}]")
    g = run.grid
    pk = run.column(k)
    pk1 = run.column(k + 1)
    if run.kind == BINARY64:
        v = [(pk1[i] - pk[i]) / g.dt for i in range(g.i_max + 1)]
        return 0.5 * dot_dx(v, v, g) + 0.5 * dot_Ah(pk, pk1, g, run.problem.c)
    v = [(pk1[i] - pk[i]) / g.dt for i in range(g.i_max + 1)]
    half = Fraction(1, 2)
    return half * dot_dx(v, v, g) + half * dot_Ah(pk, pk1, g, run.problem.c)


@dataclass
class EnergySeries:
    values: list
    cn: Scalar
    xi: float

    def drift(self) -> Scalar:
        """max over k of |E^{k+1/2} - E^{1/2}|; zero for exact zero-source runs."""
        e0 = self.values[0]
        return max(abs(v - e0) for v in self.values)

    def all_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)


def energy_series(run: SchemeRun) -> EnergySeries:
    values = [discrete_energy(run, k) for k in range(run.grid.k_max)]
    return EnergySeries(values=values, cn=run.cn, xi=run.cfl.xi)


def energy_lower_bound_gap(run: SchemeRun, k: int) -> Scalar:
    """``E^{k+1/2} - (1 - CN^2)/2 * ||(p^{k+1}-p^k)/dt||^2``; >= 0 under the margin."""
    g = run.grid
    pk = run.column(k)
    pk1 = run.column(k + 1)
    e = discrete_energy(run, k)
    v = [(pk1[i] - pk[i]) / g.dt for i in range(g.i_max + 1)]
    kinetic = dot_dx(v, v, g)
    if run.kind == BINARY64:
        return e - 0.5 * (1.0 - float(run.cn) ** 2) * kinetic
    return e - Fraction(1, 2) * (1 - run.cn ** 2) * kinetic


def stability_constants(xi: float, e_half) -> tuple[float, float]:
    """Constants of the uniform energy estimate.

    ``C1 = sqrt(E^{1/2})`` of the actual run (the estimate's constants may
    depend on the Cauchy data, and that is the concrete reading), and
    ``C2 = 1/sqrt(2 xi (2 - xi))``.
    """
    if not 0 < float(xi) < 1:
        raise ParameterError(f"xi must lie in (0, 1), got {xi}")
    if e_half < 0:
        raise ParameterError(f"E^(1/2) must be nonnegative, got {e_half}")
    c1 = math.sqrt(float(e_half))
    c2 = 1.0 / math.sqrt(2.0 * float(xi) * (2.0 - float(xi)))
    return c1, c2


def c2_squared(xi) -> Fraction:
    """Exact ``C2^2 = 1 / (2 xi (2 - xi))`` for rational-arithmetic checks."""
    x = to_fraction(xi)
    if not 0 < x < 1:
        raise ParameterError(f"xi must lie in (0, 1), got {xi}")
    return 1 / (2 * x * (2 - x))


@dataclass
class EnergyEstimateReport:
    ok: bool
    violations: list
    min_slack: Optional[float]
    checked: int


def check_energy_estimate(run: SchemeRun, xi=None) -> EnergyEstimateReport:
    """Validate ``sqrt(E^{k+1/2}) <= C1 + C2 dt sum_{k'=1}^{k} ||s^{k'}||`` for all k.

    Violations are findings, not exceptions: the report names the offending
    half steps.  Exact runs are decided with certified rational square-root
    enclosures; binary64 runs report the float slack.
    """
    if xi is None:
        xi = run.cfl.xi
    g = run.grid
    series = energy_series(run)
    e0 = series.values[0]

    source_sq = [None] * (g.k_max + 1)
    if run.source is not None:
        for k in range(1, g.k_max + 1):
            if k < len(run.source):
                col = run.source[k]
                source_sq[k] = dot_dx(col, col, g)

    violations = []
    min_slack: Optional[float] = None
    if run.kind == EXACT:
        c2sq = c2_squared(xi)
        dt2 = g.dt * g.dt
        terms = [to_fraction(e0)]
        for k in range(g.k_max):
            if k >= 1 and source_sq[k] is not None:
                terms.append(c2sq * dt2 * source_sq[k])
            if not certified_sqrt_leq(series.values[k], terms):
                violations.append(k)
        return EnergyEstimateReport(ok=not violations, violations=violations,
                                    min_slack=None, checked=g.k_max)

    c1, c2 = stability_constants(xi, max(float(e0), 0.0))
    acc = 0.0
    for k in range(g.k_max):
        if k >= 1 and source_sq[k] is not None:
            acc += math.sqrt(max(float(source_sq[k]), 0.0))
        rhs = c1 + c2 * float(g.dt) * acc
        lhs = math.sqrt(max(float(series.values[k]), 0.0))
        slack = rhs - lhs
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if slack < -1e-12 * max(1.0, rhs):
            violations.append(k)
    return EnergyEstimateReport(ok=not violations, violations=violations,
                                min_slack=min_slack, checked=g.k_max)
