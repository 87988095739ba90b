"""Batch front end: ``grandmorrey run <config> [options]``.

A config is flat ``key = value`` text; nesting uses dotted keys::

    # maximal operator on a 32-cell interval
    task = verify
    space.generator = interval
    space.n = 32
    function.kind = mixed
    function.m = 50
    function.seed = 1
    params.theorem_id = 2.1
    params.p = 2
    params.theta = 1
    params.lam = 0.3

Exit status is 0 when every check passes, 1 when a check fails and 2 for
configuration, admissibility or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    THEOREMS,
    SobolevParams,
    check_embeddings,
    check_hedberg,
    check_sigma_split,
    gen_test_family,
    verify_theorem,
)
from .errors import (
    AdmissibilityError,
    ConfigParseError,
    GrandMorreyError,
    InvalidSpace,
    InvalidSpec,
    IoError,
    UnsupportedFormat,
)
from .norms import GrandParams, epsilon_grid, grand_morrey_norm, lebesgue_norm, morrey_norm
from .operators import (
    cz_apply,
    fractional_maximal,
    hilbert_kernel,
    KernelSpec,
    maximal,
    potential_I,
    potential_T,
)
from .report import CheckResult, Report, emit_report
from .space import generate, load_space, load_table, regularity

TASKS = ("regularity", "norms", "apply", "verify")
SECTIONS = ("space", "function", "params", "output")
OPERATORS = ("maximal", "fractional_maximal", "potential_I", "potential_T", "cz")
FORMATS = ("json", "csv")


@dataclass
class ExperimentConfig:
    task: str
    space: dict = field(default_factory=dict)
    function: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def echo(self):
        out = {"task": self.task}
        for name in SECTIONS:
            section = getattr(self, name)
            if section:
                out[name] = {k: section[k] for k in sorted(section)}
        return out


def _value(text):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_config(text):
    """Parse flat dotted ``key = value`` text into an :class:`ExperimentConfig`."""
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key or key in flat:
            raise ConfigParseError(f"line {lineno}: empty or repeated key {key!r}")
        flat[key] = _value(val)

    task = flat.pop("task", None)
    if task not in TASKS:
        raise ConfigParseError(f"task must be one of {TASKS}, got {task!r}")
    cfg = ExperimentConfig(task)
    for key, val in flat.items():
        section, _, name = key.partition(".")
        if section not in SECTIONS or not name or "." in name:
            raise ConfigParseError(f"unknown key {key!r}")
        getattr(cfg, section)[name] = val
    _validate(cfg)
    return cfg


def _validate(cfg):
    if not cfg.space:
        raise ConfigParseError("missing space.* keys")
    if "generator" not in cfg.space and "path" not in cfg.space:
        raise ConfigParseError("space needs space.generator or space.path")
    fmt = cfg.output.get("format", "json")
    if fmt not in FORMATS:
        raise ConfigParseError(f"output.format must be one of {FORMATS}")
    if cfg.task == "verify":
        tid = str(cfg.params.get("theorem_id", ""))
        try:
            tid = f"{float(tid):.1f}"
        except ValueError:
            pass
        if tid not in THEOREMS:
            raise ConfigParseError(f"params.theorem_id must be one of {THEOREMS}, "
                                   f"got {cfg.params.get('theorem_id')!r}")
        cfg.params["theorem_id"] = tid
    if cfg.task == "apply" and cfg.params.get("operator") not in OPERATORS:
        raise ConfigParseError(f"params.operator must be one of {OPERATORS}")
    if cfg.task != "regularity":
        if "path" not in cfg.function:
            if "kind" not in cfg.function:
                raise ConfigParseError("function needs function.kind or function.path")
            if "seed" not in cfg.function:
                raise ConfigParseError("randomized function families need function.seed")


# --------------------------------------------------------------------------

def _space(cfg):
    spec = dict(cfg.space)
    if "path" in spec:
        return load_space(spec["path"])
    name = spec.pop("generator")
    return generate(name, snowflake_exponent=spec.pop("snowflake", None), **spec)


def _family(cfg, space, p, gamma, lam):
    spec = cfg.function
    if "path" in spec:
        try:
            rows = Path(spec["path"]).read_text().splitlines()
        except OSError as exc:
            raise IoError(str(exc)) from exc
        return [np.array(r.split(), dtype=float) for r in rows if r.strip()]
    return gen_test_family(space, spec["kind"], int(spec.get("m", 10)),
                           int(spec["seed"]), p=p, gamma=gamma, lam=lam)


def _kernel(space, prm):
    spec = prm.get("kernel", "hilbert")
    if spec == "hilbert":
        return hilbert_kernel(space)
    return KernelSpec(load_table(spec), name=str(spec), c_triple=2 * space.a1)


def _grand(prm, mode=None):
    mode = mode or prm.get("mode", "measure")
    p = float(prm["p"])
    gamma = prm.get("gamma")
    return GrandParams(p, float(prm.get("lam", 0.0)), float(prm.get("theta", 1.0)),
                       eps_grid=epsilon_grid(p, int(prm.get("K", 64))), mode=mode,
                       gamma=None if gamma is None else float(gamma))


def _task_regularity(cfg, space, report):
    prm = cfg.params
    gamma = float(prm.get("gamma", 1.0))
    reg = regularity(space, gamma, float(prm.get("alpha_bar", 0.5)))
    report.scalars.update({"n": space.n, "a0": space.a0, "a1": space.a1,
                           "r_min": space.r_min, "diam": space.diam,
                           "total_measure": space.total_measure})
    report.scalars.update(vars(reg))
    report.checks.append(CheckResult("ahlfors_envelope", reg.c_lower, reg.b_upper))
    report.checks.append(CheckResult("reverse_doubling", reg.beta, 1.0))


def _task_norms(cfg, space, report):
    prm = cfg.params
    gp = _grand(prm)
    family = _family(cfg, space, gp.p, gp.gamma or 1.0, gp.lam)
    grand, witness, morrey, lp = [], [], [], []
    for f in family:
        g = grand_morrey_norm(space, f, gp, full_output=True)
        grand.append(g.value)
        witness.append({"eps": g.eps, "x": g.x, "t": g.t})
        morrey.append(morrey_norm(space, f, gp.p, gp.lam, gp.mode, gp.gamma))
        lp.append(lebesgue_norm(space, f, gp.p))
    report.scalars.update({"grand_morrey": grand, "grand_witness": witness,
                           "morrey": morrey, "lebesgue": lp})
    if abs(space.total_measure - 1) <= 1e-12 and gp.mode == "measure":
        theta2 = float(prm.get("theta2", 2 * gp.theta))
        sigma = float(prm.get("sigma", gp.eps_grid[gp.eps_grid.size // 2]))
        for i, f in enumerate(family):
            for c in check_embeddings(space, f, gp.p, gp.theta, theta2,
                                      eps_grid=gp.eps_grid):
                c.name = f"{c.name}[{i}]"
                report.checks.append(c)
            c = check_sigma_split(space, f, gp.p, gp.theta, gp.lam, sigma,
                                  eps_grid=gp.eps_grid)
            c.name = f"{c.name}[{i}]"
            report.checks.append(c)


def _task_apply(cfg, space, report):
    prm = cfg.params
    name = prm["operator"]
    p = float(prm.get("p", 2.0))
    lam = float(prm.get("lam", 0.0))
    gamma = float(prm.get("gamma", 1.0))
    family = _family(cfg, space, p, gamma, lam)
    alpha = prm.get("alpha")
    kappa = float(prm.get("kappa", 4.0))
    if name == "maximal":
        op = lambda f: maximal(space, f)  # noqa: E731
    elif name == "fractional_maximal":
        op = lambda f: fractional_maximal(space, f, gamma)  # noqa: E731
    elif name == "potential_I":
        op = lambda f: potential_I(space, f, float(alpha), gamma)  # noqa: E731
    elif name == "potential_T":
        op = lambda f: potential_T(space, f, float(alpha))  # noqa: E731
    else:
        kernel = _kernel(space, prm)
        delta = float(prm.get("delta", 0.0))
        op = lambda f: cz_apply(space, f, kernel, delta).values  # noqa: E731
    values = [op(f) for f in family]
    report.scalars["values"] = [v.tolist() for v in values]
    report.scalars["lp_ratio"] = [lebesgue_norm(space, v, p) / lebesgue_norm(space, f, p)
                                  for f, v in zip(family, values)]
    for i, (f, v) in enumerate(zip(family, values)):
        if name == "maximal":
            gap = float(np.max(np.abs(f) - v))
            report.checks.append(CheckResult(f"dominates_abs[{i}]", gap, 0.0))
        elif name in ("potential_I", "potential_T") and np.any(f):
            sob = SobolevParams(p, float(alpha), lam,
                                gamma if name == "potential_I" else None,
                                C_alpha=prm.get("C_alpha"))
            c = check_hedberg(space, f, sob, kappa=kappa)
            c.name = f"{c.name}[{i}]"
            report.checks.append(c)


def _task_verify(cfg, space, report):
    prm = dict(cfg.params)
    tid = prm.pop("theorem_id")
    kappa = float(prm.pop("kappa", 1.0))
    gamma = prm.get("gamma")
    if tid == "4.1" and gamma is None:
        raise AdmissibilityError("theorem 4.1 needs params.gamma")
    if "kernel" in prm:
        prm["kernel"] = _kernel(space, prm)
    family = _family(cfg, space, float(prm.get("p", 2.0)),
                     float(gamma) if gamma is not None else 1.0,
                     float(prm.get("lam", 0.0)))
    sub = verify_theorem(space, tid, prm, family, kappa)
    report.scalars.update(sub.scalars)
    report.checks.extend(sub.checks)


def run_experiment(config):
    """Run one experiment and return its :class:`Report`.

    ``config`` is an :class:`ExperimentConfig` or config text.
    """
    start = time.perf_counter()
    if isinstance(config, str):
        config = parse_config(config)
    report = Report(config.echo(), __version__)
    try:
        space = _space(config)
        report.scalars["space"] = space.name
        {"regularity": _task_regularity, "norms": _task_norms,
         "apply": _task_apply, "verify": _task_verify}[config.task](config, space, report)
    except (IoError, AdmissibilityError, ConfigParseError):
        raise
    except (InvalidSpec, InvalidSpace) as exc:
        raise ConfigParseError(str(exc)) from exc
    except (GrandMorreyError, ValueError) as exc:
        raise AdmissibilityError(str(exc)) from exc
    report.wall_time = time.perf_counter() - start
    return report


def _apply_overrides(cfg, args):
    if args.kappa is not None:
        cfg.params["kappa"] = args.kappa
    if args.eps_grid is not None:
        cfg.params["K"] = args.eps_grid
    if args.seed is not None:
        cfg.function["seed"] = args.seed
        if cfg.space.get("generator") == "random":
            cfg.space["seed"] = args.seed
    if args.format is not None:
        cfg.output["format"] = args.format
    if args.out is not None:
        cfg.output["path"] = args.out


def main(argv=None):
    parser = argparse.ArgumentParser(prog="grandmorrey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config", help="path to a key = value config file")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--format", choices=FORMATS)
    run.add_argument("--kappa", type=float, help="slack for explicit-constant checks")
    run.add_argument("--eps-grid", type=int, help="number of eps grid points (K)")
    run.add_argument("--seed", type=int, help="seed for randomized families")
    args = parser.parse_args(argv)

    try:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise IoError(str(exc)) from exc
        cfg = parse_config(text)
        _apply_overrides(cfg, args)
        _validate(cfg)
        report = run_experiment(cfg)
        data = emit_report(report, cfg.output.get("format", "json"))
        path = cfg.output.get("path")
        if path:
            try:
                Path(path).write_bytes(data)
            except OSError as exc:
                raise IoError(str(exc)) from exc
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
    except (ConfigParseError, AdmissibilityError, IoError, UnsupportedFormat) as exc:
        print(f"grandmorrey: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
