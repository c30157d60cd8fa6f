"""Command-line front end.

Subcommands: ``simulate`` (run trials, write logs and stats), ``check``
(consistency table for one policy over rapidity/time grids), ``bell`` (CHSH
harness), ``diagram`` (SVG spacetime diagram), ``report`` (per-policy scan
for a scenario), ``schema`` (config format as JSON).  Exit codes: 0 success,
1 check found inconsistencies, 2 bad configuration or arguments, 3 geometry
infeasibility.  The environment variable ``SIM_SEED`` supplies a default
seed when ``--seed`` is absent.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

from . import diagram, quantum, scenario
from .collapse import (
    BACKWARD_LIGHT_CONE,
    INSTANTANEOUS,
    TILTED_PLANE,
    CollapsePolicy,
    inconsistency_scan,
)
from .errors import ConfigError, GeometryError

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3


def _env_seed() -> int | None:
    raw = os.environ.get("SIM_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"SIM_SEED must be an integer, got {raw!r}", key="SIM_SEED") from None


def _load_config(path: str) -> scenario.ScenarioConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    return scenario.parse_config(p.read_text(encoding="utf-8"))


def _parse_grid(spec: str) -> tuple[float, ...]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'a:b:n', got {spec!r}", key="grid")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"malformed grid {spec!r}", key="grid") from None
    if n < 1:
        raise ConfigError("grid needs at least one point", key="grid")
    if n == 1:
        return (a,)
    step = (b - a) / (n - 1)
    return tuple(a + k * step for k in range(n))


def _parse_policy(spec: str) -> CollapsePolicy:
    if spec == "inst":
        return CollapsePolicy(INSTANTANEOUS)
    if spec == "blc":
        return CollapsePolicy(BACKWARD_LIGHT_CONE)
    if spec.startswith("plane:"):
        try:
            slope = float(spec.partition(":")[2])
        except ValueError:
            raise ConfigError(f"malformed plane slope in {spec!r}", key="policy") from None
        try:
            return CollapsePolicy(TILTED_PLANE, slope)
        except ValueError as exc:
            raise ConfigError(str(exc), key="policy") from None
    raise ConfigError(f"unknown policy {spec!r} (use inst, plane:<slope>, blc)", key="policy")


def _parse_axis(raw: str) -> tuple[float, float, float]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise ConfigError(f"axis needs 3 components, got {raw!r}", key="axes")
    vec = tuple(float(p) for p in parts)
    norm = math.sqrt(sum(v * v for v in vec))
    if abs(norm - 1.0) > 1e-9:
        raise ConfigError(f"axis {vec} is not a unit vector", key="axes")
    return vec


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError("trials must be >= 1", key="trials")
        cfg = replace(cfg, trials=args.trials)
    seed = args.seed if args.seed is not None else _env_seed()
    if seed is not None:
        cfg = replace(cfg, seed=seed)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_lines: list[str] = []
    for k in range(cfg.trials):
        log_lines.extend(scenario.run_trial(cfg, k).lines())
    stats = scenario.run_ensemble(cfg)
    (out_dir / "trial_log.tsv").write_text("\n".join(log_lines) + "\n", encoding="utf-8")
    (out_dir / "stats.txt").write_text(stats.text(), encoding="utf-8")
    (out_dir / "config.normalized.cfg").write_text(scenario.dump_config(cfg), encoding="utf-8")
    print(f"wrote {cfg.trials} trial(s) to {out_dir}")
    return EXIT_OK


def cmd_check(args) -> int:
    policy = _parse_policy(args.policy)
    zetas = _parse_grid(args.zeta_grid)
    times = _parse_grid(args.time_grid)
    report = inconsistency_scan(policy, zetas, times)
    n_bad = len(report.inconsistent_cells)
    print(f"policy {args.policy}: {len(report.cells)} cells, {n_bad} inconsistent")
    for z in report.zetas:
        row = "".join("+" if c.consistent else "-" for c in report.cells if c.zeta == z)
        print(f"zeta={z:.9g}\t{row}")
    if n_bad:
        print(f"first failing zeta: {report.first_violation_zeta:.9g}")
        return EXIT_INCONSISTENT
    print("consistent over the whole grid")
    return EXIT_OK


def cmd_bell(args) -> int:
    seed = args.seed if args.seed is not None else (_env_seed() or 0)
    if args.axes == "optimal":
        axes_a, axes_b = quantum.OPTIMAL_CHSH_AXES
    else:
        parts = args.axes.split("|")
        if len(parts) != 4:
            raise ConfigError(
                "explicit axes must be 'a|a2|b|b2', each a unit 3-vector 'x,y,z'",
                key="axes",
            )
        vecs = [_parse_axis(p) for p in parts]
        axes_a, axes_b = (vecs[0], vecs[1]), (vecs[2], vecs[3])
    result = quantum.chsh_value(axes_a, axes_b, args.trials, seed)
    print(f"trials\t{result.trials}")
    print(f"estimate\t{result.estimate:.9g}")
    print(f"analytic\t{result.analytic:.9g}")
    print(f"lhv-bound\t{result.lhv_bound:.9g}")
    print(f"violation-margin\t{result.violation_margin:.9g}")
    return EXIT_OK


def cmd_diagram(args) -> int:
    cfg = _load_config(args.config)
    frame = args.frame
    if frame == "A":
        zeta = 0.0
    elif frame == "B":
        zeta = cfg.detector_b.zeta
    elif frame.startswith("zeta:"):
        try:
            zeta = float(frame.partition(":")[2])
        except ValueError:
            raise ConfigError(f"malformed frame {frame!r}", key="frame") from None
    else:
        raise ConfigError(f"unknown frame {frame!r} (use A, B, or zeta:<v>)", key="frame")
    svg = diagram.render_scenario(cfg, zeta)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _load_config(args.config)
    zetas = _parse_grid(args.zeta_grid)
    times = _parse_grid(args.time_grid)
    report = scenario.consistency_report(cfg, zetas, times)
    sys.stdout.write(report.text())
    return EXIT_OK if report.blc_only else EXIT_INCONSISTENT


def cmd_schema(args) -> int:
    json.dump(scenario.config_schema(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def _allow_negative_grid_values(parser: argparse.ArgumentParser) -> None:
    """Let values like '-2:2:40' follow a flag with a space.

    argparse only treats '-<digits>' as a value by default; grids start with
    a negative number but contain colons.  No flag here starts with a digit
    or a dot, so widening the matcher is safe.
    """
    parser._negative_number_matcher = re.compile(r"^-[\d.]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blcsim",
        description="Spacelike-measurement simulator with pluggable collapse hypersurfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run trials, write logs and statistics")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="sim-out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("check", help="consistency table for one collapse policy")
    _allow_negative_grid_values(p)
    p.add_argument("--policy", required=True, help="inst | plane:<slope> | blc")
    p.add_argument("--zeta-grid", required=True, help="a:b:n")
    p.add_argument("--time-grid", required=True, help="a:b:n")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bell", help="CHSH Monte Carlo harness")
    p.add_argument("--axes", default="optimal", help="optimal | 'a|a2|b|b2' unit vectors")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_bell)

    p = sub.add_parser("diagram", help="emit an SVG spacetime diagram")
    p.add_argument("--config", required=True)
    p.add_argument("--frame", default="A", help="A | B | zeta:<v>")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_diagram)

    p = sub.add_parser("report", help="per-policy consistency report for a scenario")
    _allow_negative_grid_values(p)
    p.add_argument("--config", required=True)
    p.add_argument("--zeta-grid", default="0.1:3.0:30")
    p.add_argument("--time-grid", default="-2.0:2.0:40")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("schema", help="print the config schema as JSON")
    p.set_defaults(fn=cmd_schema)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
