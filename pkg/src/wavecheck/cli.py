"""Batch front door: experiments in, machine-readable tables and verdicts out.

Subcommands mirror the library surface: ``solve``, ``order``, ``energy``,
``roundoff``, ``fundamental``, ``bound``, and ``report`` (the full claims
catalog; exit status 1 if any claim is violated).  Outputs are deterministic:
identical configuration gives byte-identical CSV/JSON.  Rationals serialize
as ``p/q`` strings; binary64 values carry a lossless hex literal next to the
decimal form.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, energy, fundamental, roundoff
from .errors import (
    CflViolationError,
    DomainError,
    NonFiniteError,
    NumericDomainError,
    ParameterError,
    ShapeError,
    UnsupportedFeatureError,
)
from .grid import Field, build_grid
from .problem import default_problem, standing_wave
from .report import ClaimConfig, run_claims
from .scalars import BINARY64, EXACT, scalar_json
from .scheme import solve

USAGE_ERRORS = (
    ParameterError, ShapeError, DomainError, CflViolationError,
    UnsupportedFeatureError, NumericDomainError, NonFiniteError,
)


def rational_or_float(text: str):
    if "/" in text:
        return Fraction(text)
    return float(text)


def rational_list(text: str):
    return [Fraction(part) for part in text.split(",") if part]


def int_list(text: str):
    return [int(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavecheck",
        description="verify quantitative claims of the centered scheme for the "
                    "1D wave equation at desk scale",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, imax=100, kmax=None):
        p.add_argument("--imax", type=int, default=imax, help="space intervals")
        p.add_argument("--kmax", type=int, default=kmax,
                       help="time intervals (default: chosen from --cn)")
        p.add_argument("--c", type=rational_or_float, default=1,
                       help="propagation velocity (accepts p/q)")
        p.add_argument("--tmax", type=rational_or_float, default=1,
                       help="end time (accepts p/q)")
        p.add_argument("--cn", type=float, default=0.5,
                       help="target Courant number when --kmax is absent")
        p.add_argument("--xi", type=float, default=2.0 ** -50,
                       help="Courant margin: require cn <= 1 - xi")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory")
        p.add_argument("--config", type=Path, default=None,
                       help="key=value file supplying defaults for these flags")

    p_solve = sub.add_parser("solve", help="run the scheme, dump field + summary")
    common(p_solve)
    p_solve.add_argument("--scalar", choices=(BINARY64, EXACT), default=BINARY64)
    p_solve.add_argument("--problem", choices=("default", "standing", "zero"),
                         default="default")
    p_solve.add_argument("--m", type=int, default=1, help="standing-wave mode number")
    p_solve.set_defaults(func=cmd_solve)

    p_order = sub.add_parser("order", help="refinement chain and fitted slope")
    common(p_order)
    p_order.add_argument("--mode", choices=("convergence", "truncation"),
                         default="convergence")
    p_order.add_argument("--chain", type=int_list, default=[50, 100, 200, 400],
                         help="comma-separated i_max chain")
    p_order.add_argument("--m", type=int, default=1)
    p_order.set_defaults(func=cmd_order)

    p_energy = sub.add_parser("energy", help="energy series, drift, lower bound")
    common(p_energy)
    p_energy.add_argument("--scalar", choices=(BINARY64, EXACT), default=EXACT)
    p_energy.add_argument("--problem", choices=("default", "standing", "zero"),
                          default="default")
    p_energy.add_argument("--m", type=int, default=1)
    p_energy.set_defaults(func=cmd_energy)

    p_round = sub.add_parser("roundoff", help="shadow run: local/global errors, "
                                              "reconstruction verdict")
    common(p_round, imax=10)
    p_round.add_argument("--no-reconstruction", action="store_true",
                         help="skip the (cubic-cost) convolution check")
    p_round.set_defaults(func=cmd_roundoff)

    p_fund = sub.add_parser("fundamental", help="fundamental-solution identity checks")
    p_fund.add_argument("--depth", type=int, default=40,
                        help="table depth for closed-form/row-sum/nonneg checks")
    p_fund.add_argument("--range", dest="sweep", type=int, default=30,
                        help="max k for the identity / recurrence sweeps")
    p_fund.add_argument("--a", type=rational_list,
                        default=[Fraction(1, 4), Fraction(1, 2), Fraction(3, 4),
                                 Fraction(9, 10)],
                        help="comma-separated rationals in (0,1)")
    p_fund.add_argument("--certificates", type=int, default=500)
    p_fund.add_argument("--seed", type=int, default=20130)
    p_fund.add_argument("--out", type=Path, default=Path("."))
    p_fund.add_argument("--config", type=Path, default=None)
    p_fund.set_defaults(func=cmd_fundamental)

    p_bound = sub.add_parser("bound", help="a-priori total-error bound and optimum")
    common(p_bound)
    p_bound.add_argument("--m", type=int, default=1)
    p_bound.add_argument("--chain", type=int_list, default=[50, 100, 200])
    p_bound.set_defaults(func=cmd_bound)

    p_report = sub.add_parser("report", help="run the full claims catalog")
    p_report.add_argument("--only", type=str, default=None,
                          help="comma-separated claim ids to run; others skip")
    p_report.add_argument("--seed", type=int, default=20130)
    p_report.add_argument("--out", type=Path, default=Path("."))
    p_report.add_argument("--config", type=Path, default=None)
    p_report.add_argument("--selftest-inject-fault", action="store_true",
                          help="deliberately corrupt one check to exercise the "
                               "violation path")
    p_report.set_defaults(func=cmd_report)

    return parser


def apply_config_file(argv: list[str]) -> list[str]:
    """Expand ``--config FILE`` into flag tokens right after the subcommand.

    Explicit command-line flags still win because argparse keeps the last
    occurrence of a scalar option.
    """
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ParameterError("--config needs a file path")
    path = Path(argv[idx + 1])
    tokens = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line is not key=value: {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        tokens.extend([f"--{key}", value])
    head, tail = argv[:1], argv[1:]
    return head + tokens + tail


def resolve_grid(args, kind: str = BINARY64):
    imax = args.imax
    kmax = args.kmax
    if kmax is None:
        dx = 1.0 / imax
        dt = args.cn * dx / float(args.c)
        kmax = round(float(args.tmax) / dt)
    return build_grid(0, 1, args.tmax, imax, kmax, kind)


def pick_problem(args):
    if args.problem == "default":
        return default_problem()
    if args.problem == "standing":
        return standing_wave(args.m, float(args.c)).as_problem()
    from .problem import WaveProblem
    return WaveProblem(c=args.c, u0=None, u1=None, s=None)


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def field_csv_lines(field: Field):
    if field.kind == BINARY64:
        yield "i,k,value,value_hex"
        for i in range(field.i_max + 1):
            for k in range(field.k_max + 1):
                v = field.value(i, k)
                yield f"{i},{k},{v!r},{v.hex()}"
    else:
        yield "i,k,value"
        for i in range(field.i_max + 1):
            for k in range(field.k_max + 1):
                v = field.value(i, k)
                yield f"{i},{k},{v.numerator}/{v.denominator}"


def write_lines(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n")


def grid_summary(g) -> dict:
    return {
        "i_max": g.i_max, "k_max": g.k_max,
        "dx": scalar_json(g.dx), "dt": scalar_json(g.dt),
        "t_max": scalar_json(g.t_max),
    }


def cmd_solve(args) -> int:
    g = resolve_grid(args, args.scalar)
    prob = pick_problem(args)
    run = solve(prob, g, xi=args.xi)
    series = energy.energy_series(run)
    args.out.mkdir(parents=True, exist_ok=True)
    write_lines(args.out / "field.csv", field_csv_lines(run.field))
    summary = {
        "scalar": run.kind,
        "problem": args.problem,
        "grid": grid_summary(g),
        "cn": scalar_json(run.cn),
        "a": scalar_json(run.a),
        "cfl_satisfied": run.cfl.satisfied,
        "max_abs": scalar_json(run.field.max_abs()),
        "energy_first": scalar_json(series.values[0]),
        "energy_min": scalar_json(min(series.values)),
        "energy_max": scalar_json(max(series.values)),
    }
    write_json(args.out / "summary.json", summary)
    print(f"solve: cn={float(run.cn)} max|p|={float(run.field.max_abs())} "
          f"-> {args.out / 'field.csv'}")
    return 0


def cmd_order(args) -> int:
    if len(args.chain) < 3:
        raise ParameterError("need at least 3 grids in the chain (use --chain)")
    wave = standing_wave(args.m, float(args.c))
    grids = analysis.refinement_chain(args.chain, args.cn, float(args.c),
                                      t_max=float(args.tmax))
    fit = analysis.estimate_order(wave, grids, mode=args.mode, xi=args.xi)
    args.out.mkdir(parents=True, exist_ok=True)
    lines = ["dx,error"]
    lines += [f"{dx!r},{err!r}" for dx, err in fit.points]
    write_lines(args.out / "order.csv", lines)
    write_json(args.out / "order.json", {
        "mode": args.mode, "chain": args.chain, "cn": args.cn,
        "slope": fit.slope,
        "points": [{"dx": dx, "error": err} for dx, err in fit.points],
    })
    print(f"order[{args.mode}]: slope = {fit.slope:.4f} over chain {args.chain}")
    return 0


def cmd_energy(args) -> int:
    g = resolve_grid(args, args.scalar)
    prob = pick_problem(args)
    run = solve(prob, g, xi=args.xi)
    series = energy.energy_series(run)
    gaps = [energy.energy_lower_bound_gap(run, k) for k in range(g.k_max)]
    estimate = energy.check_energy_estimate(run, args.xi)
    args.out.mkdir(parents=True, exist_ok=True)
    lines = ["k,energy"]
    if run.kind == EXACT:
        lines += [f"{k},{v.numerator}/{v.denominator}" for k, v in enumerate(series.values)]
    else:
        lines += [f"{k},{v!r}" for k, v in enumerate(series.values)]
    write_lines(args.out / "energy.csv", lines)
    write_json(args.out / "energy.json", {
        "scalar": run.kind,
        "grid": grid_summary(g),
        "cn": scalar_json(run.cn),
        "drift": scalar_json(series.drift()),
        "drift_is_zero": series.drift() == 0,
        "nonnegative": series.all_nonnegative(),
        "lower_bound_min_gap": scalar_json(min(gaps)) if gaps else None,
        "lower_bound_holds": all(v >= 0 for v in gaps),
        "estimate_holds": estimate.ok,
        "estimate_violations": estimate.violations,
    })
    print(f"energy: drift={float(series.drift())} nonneg={series.all_nonnegative()} "
          f"estimate={'ok' if estimate.ok else 'VIOLATED'}")
    return 0


def cmd_roundoff(args) -> int:
    g = resolve_grid(args, BINARY64)
    run = roundoff.shadow_solve(default_problem(), g, xi=args.xi)
    worst_delta = roundoff.max_abs_delta(run)
    bound_rep = roundoff.check_global_bound(run)
    range_rep = roundoff.check_range(run)

    verdict = "skipped"
    mismatch = None
    if not args.no_reconstruction:
        table = fundamental.build_table(run.a_exact, g.k_max)
        rec = roundoff.reconstruct_global_error(run.delta, table, g.i_max)
        verdict = "exact-equal"
        for k in range(g.k_max + 1):
            for i in range(g.i_max + 1):
                if rec[k][i] != run.global_err[k][i]:
                    verdict = "mismatch"
                    mismatch = [i, k]
                    break
            if mismatch:
                break

    args.out.mkdir(parents=True, exist_ok=True)
    payload = {
        "grid": grid_summary(g),
        "a": {"binary64": scalar_json(run.a_float), "exact": scalar_json(run.a_exact)},
        "a_gap_ok": run.a_gap_ok,
        "range_ok": run.range_ok,
        "max_abs_value": range_rep.max_abs,
        "decomposition_ok": range_rep.decomposition_ok,
        "max_abs_local_error": scalar_json(float(worst_delta)),
        "local_bound": scalar_json(float(roundoff.LOCAL_BOUND)),
        "local_bound_ok": worst_delta <= roundoff.LOCAL_BOUND,
        "global_bound_ok": bound_rep.ok,
        "global_max_ratio": bound_rep.max_ratio,
        "norm_level_ok": bound_rep.norm_level_ok,
        "reconstruction": verdict if mismatch is None else
                          {"verdict": verdict, "first_mismatch": mismatch},
    }
    write_json(args.out / "roundoff.json", payload)
    print(f"roundoff: max|delta|={float(worst_delta):.3e} "
          f"ratio={bound_rep.max_ratio:.3e} reconstruction={verdict}")
    return 0 if verdict != "mismatch" else 1


def cmd_fundamental(args) -> int:
    import random as _random

    counts = {}
    failures = []
    for a in args.a:
        table = fundamental.build_table(a, args.depth)
        for k in range(args.depth + 1):
            for i in range(-k, k + 1):
                v = table.entry(i, k)
                if v != fundamental.lambda_closed_form(a, i, k):
                    failures.append(("closed-form", str(a), i, k))
                if v != fundamental.lambda_via_jacobi(a, i, k):
                    failures.append(("jacobi-form", str(a), i, k))
                if v < 0:
                    failures.append(("nonnegativity", str(a), i, k))
        for k in range(args.depth + 2):
            if fundamental.row_sum(table, k) != k:
                failures.append(("row-sum", str(a), k))
    counts["closed_form_points"] = len(args.a) * (args.depth + 1) ** 2
    counts["row_sums"] = len(args.a) * (args.depth + 2)

    ident = 0
    for k in range(args.sweep + 1):
        for n in range(k + 1):
            for i in range(n + 1):
                if not fundamental.check_binomial_identity(i, n, k):
                    failures.append(("binomial-identity", i, n, k))
                if k <= min(args.sweep, 25):
                    if not fundamental.check_zeilberger_recurrences(i, n, k):
                        failures.append(("shift-recurrence", i, n, k))
                ident += 1
    counts["identity_triples"] = ident

    rng = _random.Random(args.seed)
    checked = skipped = 0
    for _ in range(args.certificates):
        k = rng.randint(0, args.sweep)
        n = rng.randint(0, k)
        i = rng.randint(0, n)
        p = rng.randint(i, n)
        res = fundamental.check_certificate(i, n, k, p)
        if not res.ok:
            failures.append(("certificate", res.point, res.results))
        checked += res.checked
        skipped += 3 - res.checked
    counts["certificates_checked"] = checked
    counts["certificates_skipped"] = skipped
    counts["all_pass"] = not failures

    args.out.mkdir(parents=True, exist_ok=True)
    write_json(args.out / "fundamental.json", {
        "depth": args.depth, "sweep": args.sweep,
        "a_values": [str(a) for a in args.a],
        "failures": [list(map(str, f)) for f in failures[:10]],
        **counts,
    })
    if failures:
        print(f"fundamental: {len(failures)} check(s) FAILED, first: {failures[0]}")
        return 1
    print(f"fundamental: all identity checks pass "
          f"(depth={args.depth}, sweep={args.sweep})")
    return 0


def cmd_bound(args) -> int:
    wave = standing_wave(args.m, float(args.c))
    tc = wave.taylor_constants()
    xi = args.xi if args.xi != 2.0 ** -50 else min(0.5, 1.0 - args.cn)
    consts = analysis.derive_constants(xi, tc.C3, tc.C4, tc.alpha3, tc.alpha4,
                                       float(args.c), float(args.tmax), 0.0, 1.0)
    rows = []
    holds = True
    for imax in args.chain:
        g = analysis.refinement_chain([imax], args.cn, float(args.c),
                                      t_max=float(args.tmax))[0]
        run = solve(analysis.problem_for(wave), g, xi=2.0 ** -50)
        err = analysis.max_norm_over_time(analysis.convergence_error(wave, run), g)
        b = analysis.total_error_bound(consts, float(g.dx), float(g.dt))
        rows.append({"i_max": imax, "dx": float(g.dx), "dt": float(g.dt),
                     "measured": err, "bound": b, "holds": err <= b})
        holds = holds and err <= b
    dt_star, bound_star = analysis.optimal_dt(consts, args.cn)
    args.out.mkdir(parents=True, exist_ok=True)
    write_json(args.out / "bound.json", {
        "taylor": {"alpha3": tc.alpha3, "C3": tc.C3, "alpha4": tc.alpha4, "C4": tc.C4},
        "constants": {
            "xi": consts.xi, "C2": consts.C2, "C_prime": consts.C_prime,
            "C_second": consts.C_second, "alpha_e": consts.alpha_e,
            "C_e": consts.C_e, "alpha_Delta": consts.alpha_Delta,
            "C_Delta": consts.C_Delta,
        },
        "rows": rows,
        "optimal": {"dt": dt_star, "bound": bound_star},
        "holds_everywhere": holds,
    })
    print(f"bound: holds={holds} optimal dt={dt_star:.3e}")
    return 0 if holds else 1


def cmd_report(args) -> int:
    cfg = ClaimConfig(random_seed=args.seed,
                      inject_wrong_a=args.selftest_inject_fault)
    only = args.only.split(",") if args.only else None
    rep = run_claims(cfg, only=only)
    args.out.mkdir(parents=True, exist_ok=True)
    write_json(args.out / "claims.json", rep.to_dict())
    (args.out / "claims.txt").write_text(rep.to_text() + "\n")
    print(rep.to_text())
    return rep.exit_code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = apply_config_file(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
