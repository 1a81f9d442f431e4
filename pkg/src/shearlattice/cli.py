"""
Command-line runs, configuration parsing and CSV output.

Usage::

    shearlattice {simulate,lyapunov,pathsum,cascade,classify,sweep} \\
        --config run.json [--out DIR] [--workers N] [--seed N]

The configuration is a flat JSON object (see ``README.md``). Each run writes
one CSV and a plain-text ``<command>_report.txt`` into ``--out``. Exit status
is 0 when every asserted property holds, 1 when one fails, and 2 on a
configuration or runtime error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import cascade as _cascade
from . import duhamel, lyapunov
from .errors import ConfigError, ShearLatticeError
from .integrator import IntegratorConfig, WindowPolicy, gronwall_check, integrate
from .lattice import (
    LYAPUNOV_STABLE,
    PATHSUM_STABLE,
    UNSTABLE,
    Params,
    build_lattice,
    classify_regime,
    total_sum,
)

__all__ = ["RunConfig", "parse_config", "run", "write_csv", "sweep", "main"]

COMMANDS = ("simulate", "lyapunov", "pathsum", "cascade", "classify", "sweep")

_COMMON_KEYS = {"command", "c", "k", "L", "eta_star", "seed", "integrator", "init"}
_COMMAND_KEYS = {
    "simulate": {"tau_end", "sample_step"},
    "lyapunov": {"tau_end", "sample_step", "weight", "tol_rel"},
    "pathsum": {"t0", "t1", "J"},
    "cascade": {"J", "min_ratio", "start_at_T0"},
    "classify": set(),
    "sweep": {"grid", "J", "stable_growth_limit"},
}
_INTEGRATOR_KEYS = {
    "rel_tol", "abs_tol", "max_step", "resonance_cap_factor",
    "window_radius", "window_lead", "window_margin", "edge_tol", "max_modes",
}
_INIT_KEYS = {"kind", "eta0", "eta_min", "eta_max", "modes", "support"}

_DEFAULTS = {
    "simulate": {"tau_end": 50.0, "sample_step": 0.5},
    "lyapunov": {"tau_end": 50.0, "sample_step": 0.5, "tol_rel": 1e-10, "weight": {"order_j": 2}},
    "pathsum": {"t0": 0.0, "t1": 2.0, "J": 4},
    "cascade": {"J": 6, "min_ratio": _cascade.DEFAULT_MIN_RATIO, "start_at_T0": True},
    "classify": {},
    "sweep": {"J": 6, "stable_growth_limit": 2.0},
}
_INIT_DEFAULTS = {
    "simulate": {"kind": "delta", "eta0": 0.0, "eta_min": -16.0, "eta_max": 16.0},
    "lyapunov": {"kind": "random", "eta_min": -10.0, "eta_max": 10.0},
    "pathsum": {"kind": "random", "eta_min": -3.0, "eta_max": 3.0},
    "cascade": {"kind": "delta", "eta0": 0.0, "eta_min": -16.0, "eta_max": 16.0},
    "classify": {},
    "sweep": {},
}


@dataclass
class RunConfig:
    command: str
    params: Optional[Params]
    integrator: dict
    init: dict
    options: dict
    seed: Optional[int] = None

    def integrator_config(self) -> IntegratorConfig:
        return _make_integrator(self.integrator)

    def to_dict(self) -> dict:
        out = {"command": self.command, "seed": self.seed}
        if self.params is not None:
            out.update(c=self.params.c, k=self.params.k, L=self.params.L, eta_star=self.params.eta_star)
        out["integrator"] = dict(self.integrator)
        out["init"] = dict(self.init)
        out.update(self.options)
        return out


def _number(value, where):
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{where}: expected a number or fraction string, got {value!r}")


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key {key!r} (allowed: {', '.join(sorted(allowed))})")


def _integrator_defaults() -> dict:
    cfg, win = IntegratorConfig(), WindowPolicy()
    return {
        "rel_tol": cfg.rel_tol,
        "abs_tol": cfg.abs_tol,
        "max_step": cfg.max_step,
        "resonance_cap_factor": cfg.resonance_cap_factor,
        "window_radius": win.radius,
        "window_lead": win.lead,
        "window_margin": win.margin,
        "edge_tol": win.edge_tol,
        "max_modes": win.max_modes,
    }


def _make_integrator(d: dict) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=d["rel_tol"],
        abs_tol=d["abs_tol"],
        max_step=d["max_step"],
        resonance_cap_factor=d["resonance_cap_factor"],
        window=WindowPolicy(
            radius=int(d["window_radius"]),
            lead=d["window_lead"],
            margin=int(d["window_margin"]),
            edge_tol=d["edge_tol"],
            max_modes=int(d["max_modes"]),
        ),
    )


def _parse_params(obj, where="config") -> Params:
    if "c" not in obj:
        raise ConfigError(f"{where}: missing required key 'c'")
    if "k" not in obj and "L" not in obj:
        raise ConfigError(f"{where}: one of 'k' or 'L' is required")
    c = _number(obj["c"], f"{where}.c")
    k = _number(obj["k"], f"{where}.k") if "k" in obj else None
    L = _number(obj["L"], f"{where}.L") if "L" in obj else None
    if k is not None and L is not None and abs(k * L - 1.0) > 1e-12:
        raise ConfigError(f"{where}: k={obj['k']!r} and L={obj['L']!r} are inconsistent (kL != 1)")
    eta_star = _number(obj.get("eta_star", 0.0), f"{where}.eta_star")
    try:
        return Params(c=c, k=k, L=L, eta_star=eta_star)
    except ShearLatticeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(text: str, command: Optional[str] = None) -> RunConfig:
    """Parse and validate a JSON run configuration, filling every default.

    ``command`` (e.g. from the CLI subcommand) must agree with the config's own
    ``command`` key if both are given.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    cmd = obj.get("command", command)
    if cmd is None:
        raise ConfigError("missing required key 'command'")
    if command is not None and cmd != command:
        raise ConfigError(f"config command {cmd!r} does not match subcommand {command!r}")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r} (expected one of {', '.join(COMMANDS)})")
    _check_keys(obj, _COMMON_KEYS | _COMMAND_KEYS[cmd], "config")

    params = None if cmd == "sweep" else _parse_params(obj)

    integ = _integrator_defaults()
    user_integ = obj.get("integrator", {})
    _check_keys(user_integ, _INTEGRATOR_KEYS, "config.integrator")
    for key, value in user_integ.items():
        integ[key] = _number(value, f"config.integrator.{key}")
    try:
        _make_integrator(integ)
    except ShearLatticeError as exc:
        raise ConfigError(f"config.integrator: {exc}") from None

    init = dict(_INIT_DEFAULTS[cmd])
    user_init = obj.get("init", {})
    _check_keys(user_init, _INIT_KEYS, "config.init")
    init.update(user_init)

    options = json.loads(json.dumps(_DEFAULTS[cmd]))
    for key in _COMMAND_KEYS[cmd]:
        if key in obj:
            if isinstance(options.get(key), dict) and isinstance(obj[key], dict):
                options[key].update(obj[key])
            else:
                options[key] = obj[key]

    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ConfigError(f"config.seed: expected an integer, got {seed!r}")
    if init.get("kind") == "random" and seed is None:
        seed = 0

    _validate_options(cmd, options)
    return RunConfig(cmd, params, integ, init, options, seed)


def _validate_options(cmd, options):
    for key in ("tau_end", "sample_step", "t0", "t1", "tol_rel", "min_ratio", "stable_growth_limit"):
        if key in options:
            options[key] = _number(options[key], f"config.{key}")
    if "J" in options:
        J = options["J"]
        if isinstance(J, bool) or not isinstance(J, int) or J < (0 if cmd == "pathsum" else 1):
            raise ConfigError(f"config.J: expected a non-negative integer, got {J!r}")
    if cmd in ("simulate", "lyapunov") and not (options["tau_end"] > 0 and options["sample_step"] > 0):
        raise ConfigError("config: tau_end and sample_step must be positive")
    if cmd == "pathsum" and not options["t1"] > options["t0"]:
        raise ConfigError("config: t1 must exceed t0")
    if cmd == "lyapunov":
        _check_keys(options["weight"], {"C1", "C2", "order_j"}, "config.weight")
    if cmd == "sweep":
        grid = options.get("grid")
        if not isinstance(grid, dict) or "c" not in grid or not ("L" in grid or "k" in grid):
            raise ConfigError("config.grid: need lists 'c' and 'L' (or 'k')")
        _check_keys(grid, {"c", "L", "k", "eta_star"}, "config.grid")
        for key in ("c", "L", "k"):
            if key in grid:
                if not isinstance(grid[key], list) or not grid[key]:
                    raise ConfigError(f"config.grid.{key}: expected a nonempty list")
                grid[key] = [_number(v, f"config.grid.{key}") for v in grid[key]]


# --- CSV ------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    return str(value)


def _num(value) -> str:
    return repr(float(value))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(records: Sequence[dict], path: str, columns: Optional[Sequence[str]] = None) -> None:
    """Write homogeneous ``records`` to ``path`` (atomically, via rename).

    Floats use 17 significant digits so they round-trip exactly; NaN is
    written as an empty field.
    """
    if columns is None:
        if not records:
            raise ValueError("columns are required for an empty record set")
        columns = list(records[0])
    for rec in records:
        if list(rec) != list(columns):
            raise ValueError("records must be homogeneous and match the column list")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec[c]) for c in columns])
    _atomic_write(path, buf.getvalue())


TRAJECTORY_COLUMNS = ["tau", "eta", "re_omega", "im_omega", "abs_omega"]
CASCADE_COLUMNS = ["j", "T_j", "res_amp", "sup_amp", "dominance", "ratio", "d_pow_j"]
SWEEP_COLUMNS = ["c", "L", "k", "label", "max_growth", "check", "status", "message"]


def trajectory_records(trajectory) -> list:
    rows = []
    for tau, lat in trajectory.samples:
        for eta, w in zip(lat.etas, lat.amplitudes):
            rows.append({"tau": tau, "eta": eta, "re_omega": w.real, "im_omega": w.imag, "abs_omega": abs(w)})
    return rows


# --- commands ---------------------------------------------------------------


@dataclass
class Outcome:
    """Result of one command: CSV payload, report lines and property checks."""

    csv_name: Optional[str] = None
    records: list = field(default_factory=list)
    columns: Optional[list] = None
    lines: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # (name, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def _initial(cfg: RunConfig):
    init = cfg.init
    kind = init.get("kind", "delta")
    p = cfg.params
    try:
        if kind == "delta":
            return build_lattice(p.eta_star, init["eta_min"], init["eta_max"], "delta", eta0=init.get("eta0", p.eta_star))
        if kind == "modes":
            modes = {float(e): complex(*v) if isinstance(v, list) else complex(v) for e, v in init.get("modes", {}).items()}
            return build_lattice(p.eta_star, init["eta_min"], init["eta_max"], "modes", modes=modes)
        if kind == "random":
            return build_lattice(
                p.eta_star, init["eta_min"], init["eta_max"], "random", seed=cfg.seed, support=init.get("support")
            )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"config.init: bad or missing field ({exc})") from None
    raise ConfigError(f"config.init.kind: unknown kind {kind!r}")


def _sample_grid(tau0, tau_end, step):
    n = int(math.floor((tau_end - tau0) / step + 1e-9))
    times = [tau0 + i * step for i in range(1, n + 1)]
    if not times or times[-1] < tau_end:
        times.append(tau_end)
    return times


def _cmd_simulate(cfg: RunConfig) -> Outcome:
    p, o = cfg.params, cfg.options
    lat = _initial(cfg)
    times = [lat.tau] + _sample_grid(lat.tau, o["tau_end"], o["sample_step"])
    traj = integrate(lat, p, cfg.integrator_config(), o["tau_end"], times)
    out = Outcome("trajectory.csv", trajectory_records(traj), TRAJECTORY_COLUMNS)
    s0 = total_sum(lat)
    l1 = float(np.abs(lat.amplitudes).sum())
    drift = max(abs(total_sum(s) - s0) for _, s in traj)
    g = gronwall_check(traj, p)
    out.lines += [
        f"regime: {classify_regime(p).label}",
        f"steps: {traj.accepted} accepted, {traj.rejected} rejected",
        f"boundary_max: {_num(traj.boundary_max)}",
        f"max |sum(w) - sum(w0)|: {_num(drift)}",
        f"gronwall worst log-margin: {_num(g.worst_margin)}",
    ]
    if traj.boundary_max < 1e-12:
        out.checks.append(("conservation", drift <= 1e-8 * l1))
    out.checks.append(("gronwall", g.passed))
    if classify_regime(p).holds(PATHSUM_STABLE):
        violations = _envelope_violations(traj, lat, p)
        out.lines.append(f"stability envelope violations: {violations}")
        out.checks.append(("stability_envelope", violations == 0))
    return out


def _envelope_violations(traj, lat, p) -> int:
    """Count (tau, eta) where |w - w0| exceeds the convolved path-sum envelope."""
    d2 = 2 * p.d_stab
    src = [(e, abs(lat.amplitude(e))) for e in lat.support()]
    count = 0
    for _, snap in traj:
        for eta, w in zip(snap.etas, snap.amplitudes):
            bound = sum(m * d2 ** duhamel.lattice_distance(e, eta) for e, m in src) / (1 - d2)
            if abs(w - lat.amplitude(eta)) > bound:
                count += 1
    return count


def _cmd_lyapunov(cfg: RunConfig) -> Outcome:
    p, o = cfg.params, cfg.options
    w = o["weight"]
    std = lyapunov.WeightSpec.standard(p)
    spec = lyapunov.WeightSpec(
        C1=_number(w.get("C1", std.C1), "config.weight.C1"),
        C2=_number(w.get("C2", std.C2), "config.weight.C2"),
        order_j=int(w.get("order_j", 0)),
    )
    lat = _initial(cfg)
    times = _sample_grid(lat.tau, o["tau_end"], o["sample_step"])
    traj = integrate(lat, p, cfg.integrator_config(), o["tau_end"], times)
    rep = lyapunov.decay_monitor(traj, spec, p, tol_rel=o["tol_rel"])
    rows = []
    for j, vals in rep.values.items():
        for t, v in zip(rep.times, vals):
            rows.append({"tau": t, "order": j, "functional": v})
    out = Outcome("lyapunov.csv", rows, ["tau", "order", "functional"])
    out.lines += [f"weight: C1={_num(spec.C1)} C2={_num(spec.C2)} orders 0..{spec.order_j}"]
    out.lines += [f"order {j}: worst relative increase {_num(v)}" for j, v in rep.worst_increase.items()]
    out.checks.append(("lyapunov_monotone", rep.passed))
    return out


def _cmd_pathsum(cfg: RunConfig) -> Outcome:
    p, o = cfg.params, cfg.options
    lat = _initial(cfg)
    lat = lat.with_state(o["t0"], lat.amplitudes)
    ps = duhamel.partial_sum(lat, p, o["t0"], o["t1"], o["J"])
    traj = integrate(lat, p, cfg.integrator_config(), o["t1"])
    ode = traj.final
    tail = duhamel.series_tail_bound(p, o["t1"] - o["t0"], o["J"])
    l1 = float(np.abs(lat.amplitudes).sum())
    rows, worst = [], 0.0
    for eta in ode.etas:
        a, b = ps.amplitude(eta), ode.amplitude(eta)
        worst = max(worst, abs(a - b))
        if ps.n_min <= ps.offset_of(eta) <= ps.n_max:
            rows.append({"eta": eta, "re_partial": a.real, "im_partial": a.imag,
                         "re_ode": b.real, "im_ode": b.imag, "abs_diff": abs(a - b)})
    out = Outcome("pathsum.csv", rows, ["eta", "re_partial", "im_partial", "re_ode", "im_ode", "abs_diff"])
    out.lines += [f"max |ode - partial_sum|: {_num(worst)}", f"tail bound * |w0|_1: {_num(tail * l1)}"]
    out.checks.append(("tail_bound", worst <= tail * l1))
    return out


def _cmd_cascade(cfg: RunConfig) -> Outcome:
    p, o = cfg.params, cfg.options
    lat = _initial(cfg)
    rep = _cascade.run_cascade(p, lat, o["J"], cfg.integrator_config(), start_at_T0=bool(o["start_at_T0"]))
    growth = _cascade.verify_growth(rep, p)
    out = Outcome("cascade.csv", rep.records(), CASCADE_COLUMNS)
    out.lines += [f"regime: {classify_regime(p).label}", f"d_grow: {_num(rep.d_grow)}", f"r_exact: {_num(rep.r_exact)}"]
    out.lines += [f"warning: {w}" for w in rep.warnings]
    for j, rho, ref, margin in rep.ratio_diagnostics():
        out.lines.append(f"rho_{j} = {_num(rho)} vs 3/4 r_exact = {_num(ref)} (margin {_num(margin)})")
    out.checks.append(("dominance", rep.all_dominant))
    out.checks.append((f"ratio >= {_num(o['min_ratio'])}", rep.min_ratio_ok(o["min_ratio"])))
    if growth.applicable:
        out.checks.append(("growth d^j", growth.passed))
    else:
        out.lines.append("growth d^j: not applicable (d_grow <= 1)")
    return out


def _cmd_classify(cfg: RunConfig) -> Outcome:
    cls = classify_regime(cfg.params)
    rows = [{"condition": n, "value": v, "threshold": t, "holds": int(ok)} for n, v, t, ok in cls.conditions]
    out = Outcome("classify.csv", rows, ["condition", "value", "threshold", "holds"])
    out.lines += [f"label: {cls.label}", f"regimes: {', '.join(sorted(cls.regimes)) or '-'}"]
    return out


def sweep_point(c, L, eta_star, J, integrator, growth_limit) -> dict:
    """Classify one grid point and run the matching simulation check.

    Errors are captured into the row instead of propagating.
    """
    row = {"c": c, "L": L, "k": math.nan, "label": "", "max_growth": math.nan, "check": "n/a", "status": "ok", "message": ""}
    try:
        p = Params(c=c, L=L, eta_star=eta_star)
        row["k"] = p.k
        cls = classify_regime(p)
        row["label"] = cls.label
        lat = build_lattice(eta_star, eta_star - 16, eta_star + 16, "delta", eta0=eta_star)
        rep = _cascade.run_cascade(p, lat, J, _make_integrator(integrator))
        row["max_growth"] = max(s.sup_amp for s in rep.steps) / rep.steps[0].sup_amp
        if cls.holds(UNSTABLE):
            row["check"] = "pass" if _cascade.verify_growth(rep, p).passed else "fail"
        elif cls.holds(PATHSUM_STABLE) or cls.holds(LYAPUNOV_STABLE):
            row["check"] = "pass" if row["max_growth"] <= growth_limit else "fail"
    except Exception as exc:  # recorded per row; the sweep continues
        row["status"] = "error"
        row["message"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(grid: dict, J: int = 6, integrator: Optional[dict] = None, workers: int = 1,
          stable_growth_limit: float = 2.0) -> list:
    """Run :func:`sweep_point` over the ``c`` x ``L`` grid, rows in grid order."""
    integrator = integrator or _integrator_defaults()
    Ls = grid.get("L") or [1.0 / k for k in grid["k"]]
    eta_star = float(grid.get("eta_star", 0.0))
    points = [(float(c), float(L), eta_star, J, integrator, stable_growth_limit) for c in grid["c"] for L in Ls]
    if workers <= 1 or len(points) == 1:
        return [sweep_point(*pt) for pt in points]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sweep_point, *zip(*points)))


def _cmd_sweep(cfg: RunConfig, workers: int = 1) -> Outcome:
    o = cfg.options
    rows = sweep(o["grid"], o["J"], cfg.integrator, workers, o["stable_growth_limit"])
    out = Outcome("sweep.csv", rows, SWEEP_COLUMNS)
    for r in rows:
        out.lines.append(f"c={_num(r['c'])} L={_num(r['L'])}: {r['label'] or '-'} check={r['check']} {r['status']}")
    out.checks.append(("sweep", all(r["status"] == "ok" and r["check"] != "fail" for r in rows)))
    return out


_HANDLERS = {
    "simulate": _cmd_simulate,
    "lyapunov": _cmd_lyapunov,
    "pathsum": _cmd_pathsum,
    "cascade": _cmd_cascade,
    "classify": _cmd_classify,
}


def _report_text(command, config_echo, outcome=None, error=None) -> str:
    lines = [f"command: {command}", "config:"]
    lines += ["  " + ln for ln in json.dumps(config_echo, indent=2, sort_keys=True, default=str).splitlines()]
    if outcome is not None:
        lines += outcome.lines
        lines += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in outcome.checks]
        lines.append(f"status: {'PASS' if outcome.passed else 'FAIL'}")
    if error is not None:
        lines += [f"error: {error}", "status: ERROR"]
    return "\n".join(lines) + "\n"


def run(config: RunConfig, out_dir: str = ".", workers: int = 1) -> int:
    """Execute ``config``, write CSV and report into ``out_dir``; return the exit code."""
    os.makedirs(out_dir, exist_ok=True)
    report_path = os.path.join(out_dir, f"{config.command}_report.txt")
    echo = config.to_dict()
    try:
        if config.command == "sweep":
            outcome = _cmd_sweep(config, workers)
        else:
            outcome = _HANDLERS[config.command](config)
    except (ShearLatticeError, ValueError, ArithmeticError) as exc:
        _atomic_write(report_path, _report_text(config.command, echo, error=f"{type(exc).__name__}: {exc}"))
        return 2
    write_csv(outcome.records, os.path.join(out_dir, outcome.csv_name), outcome.columns)
    _atomic_write(report_path, _report_text(config.command, echo, outcome))
    return 0 if outcome.passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shearlattice", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to a JSON run configuration")
        sp.add_argument("--out", default=".", help="output directory (default: current)")
        sp.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        cfg = parse_config(text, args.command)
        if args.seed is not None:
            cfg.seed = args.seed
    except (OSError, ConfigError) as exc:
        print(f"shearlattice: {exc}", file=sys.stderr)
        try:
            os.makedirs(args.out, exist_ok=True)
            _atomic_write(os.path.join(args.out, f"{args.command}_report.txt"),
                          _report_text(args.command, {}, error=str(exc)))
        except OSError:
            pass
        return 2
    code = run(cfg, args.out, args.workers)
    print(open(os.path.join(args.out, f"{cfg.command}_report.txt"), encoding="utf-8").read(), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
