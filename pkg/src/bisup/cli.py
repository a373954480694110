"""Command-line front end.

Subcommands: exact, infinite, classify, asym, compare, simulate, sweep.
Every record echoes the resolved inputs, so a JSON line can be replayed as a
command line and reproduce itself byte for byte (same seed, same machine).
Output is JSON Lines by default or CSV with a fixed header per command;
numeric CSV fields carry 17 significant digits.

Exit codes: 0 success, 2 validation failure, 3 numerical integrity failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .asymptotics import eval_asym, high_threshold, many_source_asym, many_source_classify
from .errors import NumericalIntegrityError, ValidationError
from .exact import log_pi_joint, pi_infinite, pi_joint
from .model import ModelParams, critical_times, normalize, normalized
from .montecarlo import SimConfig, simulate_joint

_N_TERMS = 5  # full-branch evaluations break into five printed summands

_HEADERS = {
    "exact": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "horizon",
              "p", "log_p", "branch"] + [f"term_{i}" for i in range(_N_TERMS)],
    "infinite": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2",
                 "p", "log_p", "branch"],
    "classify": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "horizon",
                 "label", "t_star", "t1", "t2", "t_tilde"],
    "asym": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "a", "horizon",
             "n", "b", "label", "prefactor", "power", "rate", "kind", "var", "log_p"],
    "compare": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "horizon",
                "n", "exact_log_p", "asym_log_p", "ratio"],
    "simulate": ["command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "horizon",
                 "paths", "steps", "seed", "bridge_correction",
                 "p_hat", "std_err", "exact_p", "z"],
    "sweep": ["command", "axis", "value", "a1", "a2", "c1", "c2", "sigma1", "sigma2",
              "a", "horizon", "b", "n", "p", "log_p", "branch",
              "exact_log_p", "asym_log_p", "label", "ratio"],
}

SWEEP_AXES = ("T", "a1", "a2", "c1", "c2", "b", "N")


def _fmt_csv(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


class _Emitter:
    def __init__(self, command: str, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.header = _HEADERS[command]
        self.writer = None
        if fmt == "csv":
            self.writer = csv.writer(stream, lineterminator="\n")
            self.writer.writerow(self.header)

    def emit(self, record: dict) -> None:
        if self.fmt == "csv":
            self.writer.writerow([_fmt_csv(record.get(k)) for k in self.header])
        else:
            full = {k: record.get(k) for k in self.header}
            self.stream.write(json.dumps(full, allow_nan=True) + "\n")


def _add_params(sub, with_horizon: bool = True) -> None:
    sub.add_argument("--a1", type=float, required=True)
    sub.add_argument("--a2", type=float, required=True)
    sub.add_argument("--c1", type=float, required=True)
    sub.add_argument("--c2", type=float, required=True)
    sub.add_argument("--sigma1", type=float, default=1.0)
    sub.add_argument("--sigma2", type=float, default=1.0)
    if with_horizon:
        sub.add_argument("--T", type=float, required=True, dest="horizon")


def _add_output(sub) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None, help="write records to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bisup",
        description="Joint boundary-crossing probabilities for two drifted "
                    "Brownian suprema: exact values, asymptotics, simulation.")
    subs = ap.add_subparsers(dest="command", required=True)

    s = subs.add_parser("exact", help="exact finite-horizon probability")
    _add_params(s)
    _add_output(s)

    s = subs.add_parser("infinite", help="infinite-horizon probability")
    _add_params(s, with_horizon=False)
    _add_output(s)

    s = subs.add_parser("classify", help="decay regime and critical times")
    _add_params(s)
    _add_output(s)

    s = subs.add_parser("asym", help="asymptotic decay form; evaluates at --N or --b")
    s.add_argument("--a1", type=float, default=None)
    s.add_argument("--a2", type=float, default=None)
    s.add_argument("--c1", type=float, required=True)
    s.add_argument("--c2", type=float, required=True)
    s.add_argument("--sigma1", type=float, default=1.0)
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--T", type=float, required=True, dest="horizon")
    s.add_argument("--N", type=float, default=None, dest="n",
                   help="evaluate the many-source form at N")
    s.add_argument("--b", type=float, default=None,
                   help="high-threshold mode: thresholds (a*b, b) at level b")
    s.add_argument("--a", type=float, default=None,
                   help="threshold ratio in (0,1); required with --b")
    _add_output(s)

    s = subs.add_parser("compare", help="exact vs asymptotic log-probability table")
    _add_params(s)
    s.add_argument("--N", type=float, nargs="+", required=True, dest="n_values")
    _add_output(s)

    s = subs.add_parser("simulate", help="Monte Carlo estimate with standard error")
    _add_params(s)
    s.add_argument("--paths", type=int, default=100_000)
    s.add_argument("--steps", type=int, default=512)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-bridge-correction", action="store_true")
    _add_output(s)

    s = subs.add_parser("sweep", help="evaluate along one parameter axis")
    s.add_argument("--axis", choices=SWEEP_AXES, required=True)
    s.add_argument("--start", type=float, required=True)
    s.add_argument("--stop", type=float, required=True)
    s.add_argument("--num", type=int, required=True)
    s.add_argument("--a1", type=float, default=None)
    s.add_argument("--a2", type=float, default=None)
    s.add_argument("--c1", type=float, default=None)
    s.add_argument("--c2", type=float, default=None)
    s.add_argument("--sigma1", type=float, default=1.0)
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--T", type=float, default=None, dest="horizon")
    s.add_argument("--a", type=float, default=None,
                   help="threshold ratio in (0,1); required for --axis b")
    _add_output(s)
    return ap


def _params_record(args) -> dict:
    return {
        "a1": args.a1, "a2": args.a2, "c1": args.c1, "c2": args.c2,
        "sigma1": args.sigma1, "sigma2": args.sigma2,
    }


def _model(args) -> ModelParams:
    return ModelParams(a1=args.a1, a2=args.a2, c1=args.c1, c2=args.c2,
                       sigma1=args.sigma1, sigma2=args.sigma2)


def _require(cond: bool, field: str, message: str) -> None:
    if not cond:
        raise ValidationError(field, message)


def _run_exact(args, emit) -> None:
    r = pi_joint(normalize(_model(args)), args.horizon)
    rec = {"command": "exact", **_params_record(args), "horizon": args.horizon,
           "p": r.p, "log_p": r.log_p, "branch": r.branch}
    terms = list(r.terms) if r.terms is not None else [None] * _N_TERMS
    rec.update({f"term_{i}": terms[i] for i in range(_N_TERMS)})
    emit(rec)


def _run_infinite(args, emit) -> None:
    r = pi_infinite(normalize(_model(args)))
    emit({"command": "infinite", **_params_record(args),
          "p": r.p, "log_p": r.log_p, "branch": r.branch})


def _run_classify(args, emit) -> None:
    p = normalize(_model(args))
    label = many_source_classify(p, args.horizon)
    ct = critical_times(p)
    emit({"command": "classify", **_params_record(args), "horizon": args.horizon,
          "label": label, "t_star": ct.t_star, "t1": ct.t1, "t2": ct.t2,
          "t_tilde": ct.t_tilde})


def _run_asym(args, emit) -> None:
    if args.b is not None:
        _require(args.a is not None, "a", "required with --b (thresholds are (a*b, b))")
        lp = high_threshold(args.a, args.c1, args.c2, args.horizon, args.b)
        emit({"command": "asym", **_params_record(args), "a": args.a,
              "horizon": args.horizon, "n": None, "b": args.b,
              "label": None, "prefactor": None, "power": None, "rate": None,
              "kind": None, "var": None, "log_p": lp.log_p})
        return
    _require(args.a1 is not None, "a1", "required unless --b is given")
    _require(args.a2 is not None, "a2", "required unless --b is given")
    p = normalize(_model(args))
    label = many_source_classify(p, args.horizon)
    form = many_source_asym(p, args.horizon)
    log_p = eval_asym(form, args.n).log_p if args.n is not None else None
    emit({"command": "asym", **_params_record(args), "a": None,
          "horizon": args.horizon, "n": args.n, "b": None,
          "label": label, "prefactor": form.prefactor, "power": form.power,
          "rate": form.rate, "kind": form.kind, "var": form.var, "log_p": log_p})


def _scaled_log_pi(p, T: float, n: float) -> float:
    r = math.sqrt(n)
    return log_pi_joint(
        normalized(p.a1 * r, p.a2 * r, p.c1 * r, p.c2 * r), T).log_p


def _run_compare(args, emit) -> None:
    p = normalize(_model(args))
    form = many_source_asym(p, args.horizon)
    for n in args.n_values:
        exact_lp = _scaled_log_pi(p, args.horizon, n)
        asym_lp = eval_asym(form, n).log_p
        emit({"command": "compare", **_params_record(args), "horizon": args.horizon,
              "n": n, "exact_log_p": exact_lp, "asym_log_p": asym_lp,
              "ratio": math.exp(exact_lp - asym_lp)})


def _run_simulate(args, emit) -> None:
    p = normalize(_model(args))
    cfg = SimConfig(paths=args.paths, steps=args.steps, seed=args.seed,
                    bridge_correction=not args.no_bridge_correction)
    est = simulate_joint(p, args.horizon, cfg)
    exact = pi_joint(p, args.horizon).p
    z = (est.p_hat - exact) / est.std_err if est.std_err > 0.0 else None
    emit({"command": "simulate", **_params_record(args), "horizon": args.horizon,
          "paths": cfg.paths, "steps": cfg.steps, "seed": cfg.seed,
          "bridge_correction": cfg.bridge_correction,
          "p_hat": est.p_hat, "std_err": est.std_err, "exact_p": exact, "z": z})


def _sweep_grid(args) -> list[float]:
    _require(args.num >= 1, "num", f"must be >= 1, got {args.num}")
    _require(math.isfinite(args.start), "start", "must be finite")
    _require(math.isfinite(args.stop), "stop", "must be finite")
    _require(args.start <= args.stop, "start",
             f"range must be ordered, got start={args.start!r} > stop={args.stop!r}")
    if args.num == 1:
        return [args.start]
    h = (args.stop - args.start) / (args.num - 1)
    return [args.start + i * h for i in range(args.num)]


def _sweep_base(args, **overrides) -> dict:
    rec = {"command": "sweep", "axis": args.axis, "value": None,
           **_params_record(args), "a": args.a, "horizon": args.horizon,
           "b": None, "n": None, "p": None, "log_p": None, "branch": None,
           "exact_log_p": None, "asym_log_p": None, "label": None, "ratio": None}
    rec.update(overrides)
    return rec


def _run_sweep(args, emit) -> None:
    grid = _sweep_grid(args)
    axis = args.axis

    if axis == "b":
        for field in ("a", "c1", "c2"):
            _require(getattr(args, field) is not None, field, f"required for --axis {axis}")
        _require(args.horizon is not None, "T", f"required for --axis {axis}")
        for b in grid:
            exact_lp = log_pi_joint(
                normalized(args.a * b, b, args.c1, args.c2), args.horizon).log_p
            asym_lp = high_threshold(args.a, args.c1, args.c2, args.horizon, b).log_p
            emit(_sweep_base(args, value=b, b=b, exact_log_p=exact_lp,
                             asym_log_p=asym_lp, ratio=math.exp(exact_lp - asym_lp)))
        return

    for field in ("a1", "a2", "c1", "c2"):
        _require(getattr(args, field) is not None, field, f"required for --axis {axis}")

    if axis == "N":
        _require(args.horizon is not None, "T", f"required for --axis {axis}")
        p = normalize(_model(args))
        label = many_source_classify(p, args.horizon)
        form = many_source_asym(p, args.horizon)
        for n in grid:
            exact_lp = _scaled_log_pi(p, args.horizon, n)
            asym_lp = eval_asym(form, n).log_p
            emit(_sweep_base(args, value=n, n=n, label=label, exact_log_p=exact_lp,
                             asym_log_p=asym_lp, ratio=math.exp(exact_lp - asym_lp)))
        return

    _require(args.horizon is not None or axis == "T", "T", "required unless it is the axis")
    for v in grid:
        kw = _params_record(args)
        horizon = args.horizon
        if axis == "T":
            horizon = v
        else:
            kw[axis] = v
        mp = ModelParams(**kw)
        r = pi_joint(normalize(mp), horizon)
        emit(_sweep_base(args, value=v, **kw, horizon=horizon,
                         p=r.p, log_p=r.log_p, branch=r.branch))


_RUNNERS = {
    "exact": _run_exact,
    "infinite": _run_infinite,
    "classify": _run_classify,
    "asym": _run_asym,
    "compare": _run_compare,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        emitter = _Emitter(args.command, args.format, out)
        _RUNNERS[args.command](args, emitter.emit)
    except ValidationError as e:
        print(f"bisup: {e}", file=sys.stderr)
        return 2
    except NumericalIntegrityError as e:
        print(f"bisup: numerical integrity: {e}", file=sys.stderr)
        return 3
    finally:
        if args.out:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
