"""Command-line front end: ``diracwalk <command> [--config FILE] [flags]``.

Exit status: 0 on success, 1 on usage errors, 2 when a measured error breaks
its proven bound. Settings come from defaults, then the JSON ``--config``
file, then explicit flags.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from functools import reduce
from pathlib import Path

import numpy as np

from . import analysis
from .errors import BoundViolation, ContractViolation, DegenerateInput, UnsupportedDimension
from .fields import GridSpec, gaussian_state, l2_norm, load_field, plane_wave_state, random_state, save_field
from .sampling import resample
from .spectral import exact_evolve
from .walk import apply_walk_steps, build_dirac_walk

COMMANDS = ("evolve", "consistency", "stability", "convergence", "end-to-end", "walk-info")

DEFAULTS = {
    "n": 1,
    "m": 1.0,
    "s": 0.0,
    "x0": 1.0,
    "l": None,
    "eps": None,
    "steps": 1,
    "N": None,
    "rho": 4,
    "period": 8.0,
    "fine_ratio": 8,
    "target_N": None,
    "state": "gaussian",
    "width": None,
    "center": None,
    "carrier": None,
    "spinor": None,
    "mode": None,
    "input": None,
    "output": None,
    "method": "walk",
    "csv": None,
    "json": None,
    "seed": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _complexes(text):
    return [complex(v.strip().replace(" ", "")) for v in str(text).split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diracwalk", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with settings (flags override it)")
    p.add_argument("--n", type=int, help="spatial dimension 1, 2 or 3")
    p.add_argument("--m", type=float, help="mass m >= 0")
    p.add_argument("--s", type=float, help="Sobolev index of the error norm")
    p.add_argument("--x0", type=float, help="total evolution time")
    p.add_argument("--l", help="step count(s), comma separated")
    p.add_argument("--eps", help="step size(s), comma separated")
    p.add_argument("--steps", type=int, help="iterations for stability/evolve")
    p.add_argument("--N", type=int, help="points per axis")
    p.add_argument("--rho", type=int, help="period = rho * x0 for convergence runs")
    p.add_argument("--period", type=float, help="box period for consistency/stability/evolve")
    p.add_argument("--fine-ratio", dest="fine_ratio", type=int, help="fine/coarse refinement r")
    p.add_argument("--target-N", dest="target_N", type=int, help="coarse lattice size for end-to-end")
    p.add_argument("--state", choices=("gaussian", "plane-wave", "random", "file"))
    p.add_argument("--width", type=float)
    p.add_argument("--center")
    p.add_argument("--carrier")
    p.add_argument("--spinor", help="comma-separated complex components, e.g. 1,1j")
    p.add_argument("--mode", help="integer plane-wave mode vector")
    p.add_argument("--input", help="initial field file (.json or binary)")
    p.add_argument("--output", help="evolved field file for `evolve`")
    p.add_argument("--method", choices=("walk", "exact"))
    p.add_argument("--csv", help="write the report table here")
    p.add_argument("--json", help="write the full JSON report here")
    p.add_argument("--seed", type=int)
    return p


def resolve_config(argv) -> dict:
    args = build_parser().parse_args(argv)
    cfg = dict(DEFAULTS)
    loaded = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: cannot read {args.config}: {exc}") from None
        unknown = set(loaded) - set(DEFAULTS) - {"command"}
        if unknown:
            raise UsageError(f"config: unknown field(s) {sorted(unknown)}")
        cfg.update({k: v for k, v in loaded.items() if k != "command"})
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            cfg[key] = value
    cfg["command"] = args.command
    if cfg["input"] and args.state is None and "state" not in loaded:
        cfg["state"] = "file"
    return _normalize(cfg)


def _normalize(cfg: dict) -> dict:
    def as_list(key, conv):
        value = cfg.get(key)
        if value is None or isinstance(value, list):
            return value
        try:
            return conv(value)
        except ValueError:
            raise UsageError(f"{key}: cannot parse {value!r}") from None

    cfg["l"] = as_list("l", _ints)
    cfg["eps"] = as_list("eps", _floats)
    cfg["center"] = as_list("center", _floats)
    cfg["carrier"] = as_list("carrier", _floats)
    cfg["mode"] = as_list("mode", _ints)
    if cfg.get("spinor") is not None:
        sp = cfg["spinor"]
        try:
            cfg["spinor"] = _complexes(sp) if isinstance(sp, str) else [complex(*v) if isinstance(v, list) else complex(v) for v in sp]
        except (ValueError, TypeError):
            raise UsageError(f"spinor: cannot parse {sp!r}") from None

    if cfg["n"] not in (1, 2, 3):
        raise UsageError(f"n: must be 1, 2 or 3, got {cfg['n']}")
    for key in ("m", "s"):
        if not cfg[key] >= 0:
            raise UsageError(f"{key}: must be >= 0, got {cfg[key]}")
    if not cfg["x0"] > 0:
        raise UsageError(f"x0: must be positive, got {cfg['x0']}")
    if cfg["l"] is not None and any(v < 1 for v in cfg["l"]):
        raise UsageError(f"l: step counts must be positive, got {cfg['l']}")
    if cfg["eps"] is not None and any(not v > 0 for v in cfg["eps"]):
        raise UsageError(f"eps: must be positive, got {cfg['eps']}")
    if cfg["rho"] < 1:
        raise UsageError(f"rho: must be a positive integer, got {cfg['rho']}")
    if cfg["fine_ratio"] < 1:
        raise UsageError(f"fine_ratio: must be a positive integer, got {cfg['fine_ratio']}")
    if cfg["steps"] < 0:
        raise UsageError(f"steps: must be >= 0, got {cfg['steps']}")
    if cfg["state"] == "file" and not cfg["input"]:
        raise UsageError("input: state 'file' needs --input")
    return cfg


# artifact locations do not change the experiment
_UNHASHED = ("csv", "json", "output")


def config_hash(cfg: dict) -> str:
    canon = json.dumps({k: v for k, v in cfg.items() if k not in _UNHASHED}, sort_keys=True, default=lambda v: [v.real, v.imag] if isinstance(v, complex) else str(v))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _spinor_dim(n: int) -> int:
    return 4 if n == 3 else 2


def initial_state(cfg: dict, grid: GridSpec):
    kind = cfg["state"]
    n = cfg["n"]
    if kind == "file":
        phi = load_field(cfg["input"])
        if phi.grid.n != n:
            raise UsageError(f"input: field is {phi.grid.n}-dimensional, n={n}")
        return phi
    if kind == "gaussian":
        width = cfg["width"] or grid.period / 8
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return gaussian_state(grid, width, cfg["center"], cfg["carrier"], cfg["spinor"])
    if kind == "plane-wave":
        return plane_wave_state(grid, cfg["mode"] or [0] * n, cfg["spinor"])
    return random_state(grid, _spinor_dim(n), np.random.default_rng(cfg["seed"]))


def _single(values, key):
    if not values or len(values) != 1:
        raise UsageError(f"{key}: exactly one value required, got {values}")
    return values[0]


def _write(path, text):
    if path:
        Path(path).write_text(text)


def _rows_report(cfg, rows, extra) -> tuple[str, str]:
    comments = [f"diracwalk {cfg['command']} config-sha256={config_hash(cfg)}"]
    lines = [f"# {c}\n" for c in comments] + ["l,eps,error,bound,ratio\n"]
    for l, eps, err, bound in rows:
        lines.append(f"{l},{eps!r},{err!r},{bound!r},{err / bound if bound else float('nan')!r}\n")
    payload = dict(extra, command=cfg["command"], config_hash=config_hash(cfg),
                   rows=[dict(l=l, eps=e, error=err, bound=b) for l, e, err, b in rows])
    return "".join(lines), json.dumps(payload, indent=2, sort_keys=True)


def cmd_walk_info(cfg) -> int:
    eps = _single(cfg["eps"], "eps")
    text = json.dumps(build_dirac_walk(cfg["n"], cfg["m"], eps).to_dict(), indent=2, sort_keys=True)
    _write(cfg["json"], text)
    print(text)
    return 0


def cmd_stability(cfg) -> int:
    n = cfg["n"]
    eps = _single(cfg["eps"], "eps")
    N = cfg["N"] or (64 if n < 3 else 16)
    phi = initial_state(cfg, GridSpec(n, N, eps))
    ratio = analysis.stability_check(phi, cfg["m"], eps, cfg["s"], cfg["steps"])
    dev = abs(ratio - 1.0)
    _write(cfg["json"], json.dumps({"ratio": ratio, "deviation": dev, "steps": cfg["steps"],
                                    "config_hash": config_hash(cfg)}, indent=2, sort_keys=True))
    print(f"ratio = {ratio:.15f} (|ratio - 1| = {dev:.2e} after {cfg['steps']} steps)")
    return 0 if dev <= 1e-10 else 2


def cmd_consistency(cfg) -> int:
    n = cfg["n"]
    eps_list = sorted(cfg["eps"] or [0.25, 0.125], reverse=True)
    L = cfg["period"]
    grids = []
    for eps in eps_list:
        N = L / eps
        if abs(N - round(N)) > 1e-9 * N or round(N) % 2:
            raise UsageError(f"eps: period {L:g} / eps {eps:g} is not an even integer")
        grids.append(int(round(N)))
    master = initial_state(cfg, GridSpec.from_period(n, grids[0], L))
    rows = []
    for eps, N in zip(eps_list, grids):
        err, bound = analysis.consistency_error(resample(master, N), cfg["m"], n, eps, cfg["s"], check=False)
        rows.append((1, eps, err, bound))
    halving = [a[2] / b[2] for a, b in zip(rows, rows[1:]) if b[2] > 0]
    text, js = _rows_report(cfg, rows, {"halving_ratios": halving})
    _write(cfg["csv"], text)
    _write(cfg["json"], js)
    worst = max(r[2] / r[3] for r in rows)
    print(f"max error/bound = {worst:.3g}; error ratios per step change: "
          + ", ".join(f"{h:.3f}" for h in halving))
    return 0 if all(r[2] <= r[3] * (1 + analysis.BOUND_SLACK) for r in rows) else 2


def cmd_convergence(cfg) -> int:
    n = cfg["n"]
    ls = cfg["l"] or [8, 16, 32, 64]
    L = cfg["rho"] * cfg["x0"]
    if cfg["state"] == "file":
        master = initial_state(cfg, None)
    else:
        master = initial_state(cfg, GridSpec.from_period(n, int(round(L * min(ls) / cfg["x0"])), L))
    try:
        report = analysis.convergence_study(master, cfg["m"], cfg["x0"], ls, cfg["s"], n, check=False)
    except ValueError as exc:
        raise UsageError(f"l: {exc}") from None
    comments = [f"diracwalk convergence config-sha256={config_hash(cfg)}"]
    _write(cfg["csv"], report.to_csv(comments))
    _write(cfg["json"], report.to_json())
    if report.fitted_order is None and len(report.rows) < 2:
        print(f"single row, no order fitted; error/bound {report.max_ratio:.3g}")
    elif report.fitted_order is None:
        print(f"errors at rounding level (max {max(r.error for r in report.rows):.2e}); no order fitted")
    else:
        print(f"order ≈ {report.fitted_order:.1f} (fit {report.fitted_order:.4f}, max error/bound {report.max_ratio:.3g})")
    return 0 if report.within_bounds else 2


def cmd_end_to_end(cfg) -> int:
    n = cfg["n"]
    ls = cfg["l"] or [16, 32, 64]
    x0 = cfg["x0"]
    r = cfg["fine_ratio"]
    if cfg["target_N"] is not None:
        l = _single(ls, "l")
        L = cfg["target_N"] * x0 / l
        coarse = [cfg["target_N"]]
    else:
        L = cfg["rho"] * x0
        coarse = [int(round(L * l / x0)) for l in ls]
    N_fine = r * reduce(math.lcm, coarse)
    if cfg["state"] == "file":
        phi = initial_state(cfg, None)
    else:
        phi = initial_state(cfg, GridSpec.from_period(n, N_fine, L))
    rows, residuals = [], []
    for l in ls:
        res = analysis.end_to_end_error(phi, cfg["m"], x0, l, cfg["s"], n, check=False)
        rows.append((l, x0 / l, res.error, res.bound))
        residuals.append(res.identity_residual)
    text, js = _rows_report(cfg, rows, {"identity_residuals": residuals, "fine_N": phi.grid.N})
    _write(cfg["csv"], text)
    _write(cfg["json"], js)
    worst = max(e / b for _, _, e, b in rows)
    print(f"max error/bound = {worst:.3g}; max identity residual = {max(residuals):.2e}")
    ok = all(e <= b * (1 + analysis.BOUND_SLACK) for _, _, e, b in rows) and max(residuals) <= 1e-11
    return 0 if ok else 2


def cmd_evolve(cfg) -> int:
    n = cfg["n"]
    if cfg["state"] == "file":
        phi = initial_state(cfg, None)
        eps = phi.grid.spacing if cfg["eps"] is None else _single(cfg["eps"], "eps")
    else:
        eps = _single(cfg["eps"] or [cfg["period"] / (cfg["N"] or 64)], "eps")
        N = cfg["N"] or int(round(cfg["period"] / eps))
        phi = initial_state(cfg, GridSpec(n, N, eps))
    steps = cfg["steps"]
    if cfg["method"] == "walk":
        out = apply_walk_steps(build_dirac_walk(n, cfg["m"], eps), phi, steps)
    else:
        out = exact_evolve(phi, steps * eps, cfg["m"])
    if cfg["output"]:
        save_field(cfg["output"], out)
    print(f"evolved {steps} x eps={eps:g} ({cfg['method']}); norm = {l2_norm(out):.15f}")
    return 0


HANDLERS = {
    "evolve": cmd_evolve,
    "consistency": cmd_consistency,
    "stability": cmd_stability,
    "convergence": cmd_convergence,
    "end-to-end": cmd_end_to_end,
    "walk-info": cmd_walk_info,
}


def run(cfg: dict) -> int:
    return HANDLERS[cfg["command"]](cfg)


def main(argv=None) -> int:
    try:
        cfg = resolve_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ContractViolation, UnsupportedDimension, DegenerateInput, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BoundViolation as exc:
        print(f"bound violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
