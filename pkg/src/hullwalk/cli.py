"""Command-line interface: simulate | limits | clt | constants | exact | report.

Simulation output is CSV with a '#'-prefixed metadata header; everything else
is JSON.  Exit codes: 0 success, 1 configuration or validation error,
2 numeric failure (NaN in results).  The HULLWALK_THREADS environment
variable caps the worker processes without changing any output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__, limits, montecarlo
from .errors import HullwalkError
from .hullstream import CheckpointSchedule
from .walkgen import DEFAULT_BROWNIAN_GRID, format_model, parse_model

DEFAULT_BUDGET = 10**10

CSV_COLUMNS = (
    "n,mean_L,se_L,var_L,se_varL,mean_A,se_A,var_A,se_varA,mean_r"
)


class ConfigError(Exception):
    """Invalid configuration or arguments (exit code 1)."""


class NumericFailure(Exception):
    """NaN encountered in results (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Round-trippable simulation configuration."""

    model: str
    steps: int
    replicates: int
    seed: int
    schedule: str
    budget: int = DEFAULT_BUDGET
    force: bool = False

    def validate(self):
        model = parse_model(self.model)  # raises ValueError on bad spec
        sched = CheckpointSchedule.parse(self.schedule)
        if self.steps < 0:
            raise ConfigError(f"steps must be nonnegative, got {self.steps}")
        if self.replicates < 2:
            raise ConfigError(f"replicates must be >= 2, got {self.replicates}")
        work = self.steps * self.replicates
        if work > self.budget and not self.force:
            raise ConfigError(
                f"steps * replicates = {work} exceeds the budget guard {self.budget}; "
                "pass --force to run anyway"
            )
        return model, sched

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "steps": self.steps,
            "replicates": self.replicates,
            "seed": self.seed,
            "schedule": self.schedule,
            "budget": self.budget,
            "force": self.force,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="hullwalk", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo estimates along a checkpoint schedule")
    sim.add_argument("--model", required=True, help="increment model spec")
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--replicates", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--schedule", default="geometric:10,1.25")
    sim.add_argument("--out", default="-", help="CSV output path, '-' for stdout")
    sim.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sim.add_argument("--force", action="store_true", help="override the budget guard")

    lim = sub.add_parser("limits", help="limit constants and variance bounds for a model")
    lim.add_argument("--model", required=True)
    lim.add_argument("--out", default="-")
    lim.add_argument("--allow-heavy", action="store_true", help="permit infinite-variance models")

    clt = sub.add_parser("clt", help="KS normality check of the scaled perimeter")
    clt.add_argument("--model", default="pr:0.2,0")
    clt.add_argument("--steps", type=int, default=5000)
    clt.add_argument("--replicates", type=int, default=10000)
    clt.add_argument("--seed", type=int, default=0)
    clt.add_argument("--hist-out", default="hullwalk_clt_hist.csv")
    clt.add_argument("--out", default="-")

    con = sub.add_parser("constants", help="Monte Carlo estimates of the Brownian hull constants")
    con.add_argument("--grid", type=int, default=DEFAULT_BROWNIAN_GRID)
    con.add_argument("--replicates", type=int, default=2000)
    con.add_argument("--seed", type=int, default=0)
    con.add_argument("--out", default="-")

    ext = sub.add_parser("exact", help="exact enumeration of E L_n, Var L_n, E A_n at small n")
    ext.add_argument("--model", required=True)
    ext.add_argument("--steps", type=int, required=True)
    ext.add_argument("--out", default="-")

    rep = sub.add_parser("report", help="match a simulate CSV against limits JSON")
    rep.add_argument("--in", dest="csv_in", required=True, help="simulate CSV")
    rep.add_argument("--limits", dest="limits_in", required=True, help="limits JSON")
    rep.add_argument("--out", default="-")
    return p


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _check_finite(values):
    if not np.isfinite(np.asarray(list(values), dtype=float)).all():
        raise NumericFailure("NaN or infinity in results")


def _fmt(x: float) -> str:
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = RunConfig(
        model=args.model,
        steps=args.steps,
        replicates=args.replicates,
        seed=args.seed,
        schedule=args.schedule,
        budget=args.budget,
        force=args.force,
    )
    model, sched = cfg.validate()
    ests = montecarlo.estimate(model, cfg.steps, sched, cfg.replicates, cfg.seed)
    by_cp: dict[int, dict[str, montecarlo.MonteCarloEstimate]] = {}
    for e in ests:
        by_cp.setdefault(e.n, {})[e.statistic] = e
    _check_finite(e.value for e in ests)

    heavy = not model.moments().finite_variance
    lines = [
        f"# hullwalk simulate v{__version__}",
        f"# timestamp: {datetime.now(timezone.utc).isoformat()}",
        f"# model: {format_model(model)}",
        f"# seed: {cfg.seed}",
        f"# steps: {cfg.steps}",
        f"# replicates: {cfg.replicates}",
        f"# schedule: {sched.spec_string()}",
    ]
    if heavy:
        lines.append("# heavy_tail: true")
    lines.append(CSV_COLUMNS)
    for n in sorted(by_cp):
        row = by_cp[n]
        lines.append(
            ",".join(
                [str(n)]
                + [
                    _fmt(v)
                    for v in (
                        row["meanL"].value,
                        row["meanL"].std_error,
                        row["varL"].value,
                        row["varL"].std_error,
                        row["meanA"].value,
                        row["meanA"].std_error,
                        row["varA"].value,
                        row["varA"].std_error,
                        row["meanR"].value,
                    )
                ]
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_limits(args) -> int:
    model = parse_model(args.model)
    mom = model.moments()
    if not mom.finite_variance and not args.allow_heavy:
        raise ConfigError(
            f"model {format_model(model)!r} has infinite variance; "
            "no limit constants apply (pass --allow-heavy to emit drift only)"
        )
    out: dict = {"model": format_model(model), "norm_mu": mom.norm_mu}
    if mom.finite_variance:
        out.update(dict(limits.limit_constants(mom)))
        vb = limits.variance_bounds(
            trace_sigma=mom.sigma2, identity=mom.Sigma == ((1.0, 0.0), (0.0, 1.0))
        )
        out["u0_bounds"] = list(vb.u0)
        out["v0_bounds"] = list(vb.v0)
        out["v_plus_bounds"] = list(vb.v_plus)
        out["det_Sigma"] = mom.det_Sigma
        out["sigma2_perp"] = mom.sigma2_perp
    else:
        out["2norm_mu"] = 2.0 * mom.norm_mu
        out["heavy_tail"] = True
    _check_finite(v for v in out.values() if isinstance(v, float))
    _write_text(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_clt(args) -> int:
    model = parse_model(args.model)
    try:
        result = montecarlo.clt_test(model, args.steps, args.replicates, args.seed)
    except HullwalkError as exc:
        raise ConfigError(f"CLT check not applicable: {exc}") from exc
    mom = model.moments()
    samples = montecarlo.collect_samples(model, args.steps, args.replicates, args.seed, "L")
    z = montecarlo.standardized_perimeter_samples(samples, mom.sigma2_mu)
    counts, edges = np.histogram(z, bins=64, range=(-4.0, 4.0))
    hist_lines = ["bin_left,bin_right,count"]
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        hist_lines.append(f"{_fmt(lo)},{_fmt(hi)},{int(c)}")
    _write_text(args.hist_out, "\n".join(hist_lines) + "\n")
    verdict = {
        "D": result.D,
        "threshold": result.threshold,
        "pass": result.passed,
        "model": format_model(model),
        "steps": args.steps,
        "replicates": args.replicates,
        "histogram": args.hist_out,
    }
    _check_finite([result.D])
    _write_text(args.out, json.dumps(verdict, indent=2) + "\n")
    return 0


def cmd_constants(args) -> int:
    ests = limits.brownian_constant_estimates(args.grid, args.replicates, args.seed)
    constants, bounds = limits.brownian_reference_values()
    report = limits.assemble_report(ests, constants, bounds)
    out = {
        "grid": args.grid,
        "replicates": args.replicates,
        "seed": args.seed,
        "estimates": {k: {"value": e.value, "std_error": e.std_error} for k, e in ests.items()},
        "report": [r.to_dict() for r in report],
    }
    _check_finite(e.value for e in ests.values())
    _write_text(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_exact(args) -> int:
    model = parse_model(args.model)
    try:
        ex = montecarlo.enumerate_exact(model, args.steps)
        check = montecarlo.martingale_decomposition_check(model, args.steps)
    except HullwalkError as exc:
        raise ConfigError(str(exc)) from exc
    ok = math.isclose(check.lhs, check.rhs, rel_tol=1e-10, abs_tol=1e-12)
    out = {
        "model": format_model(model),
        "steps": args.steps,
        "EL": ex.EL,
        "VarL": ex.VarL,
        "EA": ex.EA,
        "mdiff_lhs": check.lhs,
        "mdiff_rhs": check.rhs,
        "mdiff_check": "ok" if ok else "mismatch",
    }
    _check_finite([ex.EL, ex.VarL, ex.EA])
    _write_text(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def _read_simulate_csv(path: str) -> tuple[dict, list[dict]]:
    meta: dict = {}
    rows: list[dict] = []
    header: list[str] | None = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    meta[key.strip()] = val.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            parts = line.split(",")
            rows.append({k: float(v) for k, v in zip(header, parts)})
    if header is None or not rows:
        raise ConfigError(f"{path} contains no data rows")
    return meta, rows


def cmd_report(args) -> int:
    meta, rows = _read_simulate_csv(args.csv_in)
    with open(args.limits_in) as fh:
        lim = json.load(fh)
    final = rows[-1]
    n = final["n"]
    if n < 1:
        raise ConfigError("final checkpoint must be at least 1")
    R = int(meta.get("replicates", "0")) or None

    def mce(stat, value, se):
        return montecarlo.MonteCarloEstimate(int(n), stat, value, se, R or 0)

    estimates = {}
    constants = {}
    bounds = {}
    drift = lim.get("norm_mu", 0.0) > 0.0
    if drift:
        estimates["2norm_mu"] = mce("meanL/n", final["mean_L"] / n, final["se_L"] / n)
        constants["2norm_mu"] = lim["2norm_mu"]
        if "4sigma2_mu" in lim:
            estimates["4sigma2_mu"] = mce("varL/n", final["var_L"] / n, final["se_varL"] / n)
            constants["4sigma2_mu"] = lim["4sigma2_mu"]
        if "drift_area_coeff" in lim:
            estimates["drift_area_coeff"] = mce(
                "meanA/n^1.5", final["mean_A"] / n**1.5, final["se_A"] / n**1.5
            )
            constants["drift_area_coeff"] = lim["drift_area_coeff"]
        if "v_plus_bounds" in lim and lim.get("sigma2_perp"):
            scale = lim["norm_mu"] ** 2 * lim["sigma2_perp"] * n**3
            estimates["v_plus"] = mce("varA/n^3", final["var_A"] / scale, final["se_varA"] / scale)
            bounds["v_plus"] = tuple(lim["v_plus_bounds"])
    else:
        estimates["4E_norm_Y"] = mce(
            "meanL/sqrt(n)", final["mean_L"] / math.sqrt(n), final["se_L"] / math.sqrt(n)
        )
        constants["4E_norm_Y"] = lim["4E_norm_Y"]
        estimates["pi_over_2_sqrt_det"] = mce("meanA/n", final["mean_A"] / n, final["se_A"] / n)
        constants["pi_over_2_sqrt_det"] = lim["pi_over_2_sqrt_det"]
        if "u0_bounds" in lim:
            # u0 bounds in limits JSON are already scaled to this model's trace.
            estimates["u0_like"] = mce("varL/n", final["var_L"] / n, final["se_varL"] / n)
            bounds["u0_like"] = tuple(lim["u0_bounds"])
        if "v0_bounds" in lim and lim.get("det_Sigma"):
            scale = lim["det_Sigma"] * n**2
            estimates["v0"] = mce("varA/n^2", final["var_A"] / scale, final["se_varA"] / scale)
            bounds["v0"] = tuple(lim["v0_bounds"])
    report = limits.assemble_report(estimates, constants, bounds)
    out = {
        "source": args.csv_in,
        "limits": args.limits_in,
        "n": int(n),
        "report": [r.to_dict() for r in report],
    }
    _write_text(args.out, json.dumps(out, indent=2) + "\n")
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "limits": cmd_limits,
    "clt": cmd_clt,
    "constants": cmd_constants,
    "exact": cmd_exact,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, HullwalkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
