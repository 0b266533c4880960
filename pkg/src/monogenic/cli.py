"""Command-line driver producing self-describing JSON or CSV reports.

Exit codes: 0 when every checked inequality holds, 1 when one is violated,
2 on configuration errors (bad flags, under-resolved quadrature, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .basis import enumerate_upto
from .bohr import (
    REFERENCE_RADIUS,
    BohrVariant,
    MajorantConfig,
    bohr_sup,
    derivative_closed_form,
    derivative_coefficient_majorant,
    derivative_series_sum,
    majorant_radius,
    main_part_derivative_max,
    verify_derivative_bound,
)
from .diagnostics import monogenicity_sweep, order_summary, random_ball_points
from .errors import ConfigurationError, MonogenicError
from .quadrature import DEFAULT_RULE, PARTS, coordinate_cross_products, gram_matrix, make_ball_rule, norm_table
from .series import Constraint, coefficient_bound_check, sample_random

SCHEMA = 1
EXIT_OK, EXIT_VIOLATED, EXIT_CONFIG = 0, 1, 2
GRAM_TOLERANCE = 1e-8
SERIES_TOLERANCE = 1e-8
SERIES_TERMS = 1000
DEFAULT_RADII = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class RunConfig:
    command: str
    n_max: int
    rule: tuple[int, int, int]
    seed: int
    seeds: int
    samples: int
    points: int
    radii: tuple[float, ...]
    out: str | None
    format: str
    cs_phase: bool = False

    def as_dict(self) -> dict:
        d = asdict(self)
        d["rule"] = list(self.rule)
        d["radii"] = list(self.radii)
        return d


@dataclass
class Report:
    passed: bool
    summary: dict
    rows: list[dict]
    checksum: str


# ---------------------------------------------------------------------------
# commands


def cmd_gram(cfg: RunConfig) -> Report:
    """Gram deviations of the normalized basis for every part.

    ``full`` and ``scalar`` must be diagonal; the ``e1``/``e2`` parts are not
    mutually orthogonal across elements, so their gate is the orthogonality
    of the coordinates *within* each element and the off-diagonal size is
    reported for information.
    """
    rule = make_ball_rule(*cfg.rule)
    rule.check_exactness(2 * cfg.n_max, what=f"Gram integrand for degree {cfg.n_max}")
    nt = norm_table(cfg.n_max, sc_max_samples=cfg.samples)
    grams = {part: gram_matrix(cfg.n_max, rule, part, nt) for part in PARTS}
    k = grams["full"].shape[0]
    off = ~np.eye(k, dtype=bool)
    cross = coordinate_cross_products(cfg.n_max, rule, nt)
    summary = {
        "size": k,
        "full_max_deviation": float(np.abs(grams["full"] - np.eye(k)).max()),
        "scalar_max_off_diagonal": float(np.abs(grams["scalar"][off]).max()),
        "e1_max_off_diagonal": float(np.abs(grams["e1"][off]).max()),
        "e2_max_off_diagonal": float(np.abs(grams["e2"][off]).max()),
        "coordinate_cross_max": float(np.abs(cross).max()),
        "tolerance": GRAM_TOLERANCE,
        "rule_exact_degree": rule.exact_degree,
    }
    passed = (
        summary["full_max_deviation"] <= GRAM_TOLERANCE
        and summary["scalar_max_off_diagonal"] <= GRAM_TOLERANCE
        and summary["coordinate_cross_max"] <= GRAM_TOLERANCE
    )
    labels = [idx.label() for idx in enumerate_upto(cfg.n_max)]
    rows = [
        {"i": labels[a], "j": labels[b], **{part: float(grams[part][a, b]) for part in PARTS}}
        for a in range(k)
        for b in range(k)
    ]
    return Report(passed, summary, rows, nt.checksum())


def cmd_monogenicity(cfg: RunConfig) -> Report:
    nt = norm_table(cfg.n_max, sc_max_samples=cfg.samples)
    pts = random_ball_points(cfg.points, cfg.seed)
    rows = monogenicity_sweep(cfg.n_max, pts, nt, cs_phase=cfg.cs_phase)
    summary = {
        "elements": len(rows),
        "failures": sum(not r.holds for r in rows),
        "max_residual": max(r.residual for r in rows),
        "max_derivative_error": max(r.derivative_error for r in rows),
        "min_observed_order": order_summary(rows),
        "cs_phase": cfg.cs_phase,
    }
    return Report(all(r.holds for r in rows), summary, [r.as_dict() for r in rows], nt.checksum())


def cmd_bohr(cfg: RunConfig) -> Report:
    nt = norm_table(cfg.n_max, sc_max_samples=cfg.samples)
    rows = []
    cases = [
        (BohrVariant.GROUPED_BY_DEGREE, Constraint.ZERO_AT_ORIGIN),
        (BohrVariant.TERMWISE, Constraint.ORTHOGONAL_TO_HHOLO),
    ]
    for variant, constraint in cases:
        radii = cfg.radii or (REFERENCE_RADIUS[variant.value],)
        for k in range(cfg.seeds):
            seed = cfg.seed + k
            s = sample_random(seed, cfg.n_max, constraint, 1.0, nt, cfg.samples)
            for r in radii:
                value = bohr_sup(s, r, variant, nt, cfg.samples)
                rows.append({"check": variant.value, "seed": seed, "r": r, "value": value, "holds": value < 1.0})
            if constraint is Constraint.ORTHOGONAL_TO_HHOLO:
                rep = coefficient_bound_check(s, nt, cfg.samples)
                rows.append(
                    {
                        "check": "coefficient_bounds",
                        "seed": seed,
                        "r": None,
                        "value": rep.min_slack,
                        "holds": rep.holds and rep.orthogonality_verified,
                    }
                )
    majorant_config = MajorantConfig()
    nt_majorant = norm_table(majorant_config.degree, sc_max_samples=cfg.samples)
    radius_reports = {v.value: majorant_radius(v, nt_majorant, majorant_config).as_dict() for v in BohrVariant}
    summary = {
        "seeds": cfg.seeds,
        "violations": sum(not r["holds"] for r in rows),
        "max_grouped": max((r["value"] for r in rows if r["check"] == "grouped_by_degree"), default=None),
        "max_termwise": max((r["value"] for r in rows if r["check"] == "termwise"), default=None),
        "radius_reports": radius_reports,
    }
    return Report(summary["violations"] == 0, summary, rows, nt.checksum())


def cmd_derivative(cfg: RunConfig) -> Report:
    nt = norm_table(cfg.n_max, sc_max_samples=cfg.samples)
    radii = cfg.radii
    rows = []
    for k in range(cfg.seeds):
        seed = cfg.seed + k
        for form, constraint in (("scalar", Constraint.NONE), ("modulus", Constraint.ORTHOGONAL_TO_HHOLO)):
            s = sample_random(seed, cfg.n_max, constraint, 1.0, nt, cfg.samples)
            rep = verify_derivative_bound(s, radii, nt, form, cfg.samples)
            for row in rep.rows:
                rows.append({"check": form, "seed": seed, "r": row.r, "lhs": row.lhs, "rhs": row.rhs, "holds": row.holds})
            if form == "scalar":
                for r in radii:
                    lhs = main_part_derivative_max(s, r, nt, cfg.samples)
                    rhs = derivative_coefficient_majorant(s, r)
                    rows.append({"check": "coefficient_majorant", "seed": seed, "r": r, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs})
    for r in (0.0,) + tuple(radii):
        total = derivative_series_sum(r, SERIES_TERMS).value
        closed = derivative_closed_form(r)
        rel = abs(total - closed) / closed
        rows.append({"check": "series_identity", "seed": None, "r": r, "lhs": total, "rhs": closed, "holds": rel <= SERIES_TOLERANCE})
    summary = {"seeds": cfg.seeds, "radii": list(radii), "violations": sum(not r["holds"] for r in rows)}
    return Report(summary["violations"] == 0, summary, rows, nt.checksum())


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "gram": cmd_gram,
    "monogenicity": cmd_monogenicity,
    "bohr": cmd_bohr,
    "derivative": cmd_derivative,
}


# ---------------------------------------------------------------------------
# output


def render_json(cfg: RunConfig, report: Report) -> str:
    doc = {
        "schema": SCHEMA,
        "command": cfg.command,
        "config": cfg.as_dict(),
        "norm_table_checksum": report.checksum,
        "passed": report.passed,
        "summary": report.summary,
        "rows": report.rows,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_csv(cfg: RunConfig, report: Report) -> str:
    """CSV with a leading ``#`` block that carries the config and checksum."""
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n")
    buf.write(f"# config: {json.dumps(cfg.as_dict(), sort_keys=True)}\n")
    buf.write(f"# norm_table_checksum: {report.checksum}\n")
    buf.write(f"# passed: {str(report.passed).lower()}\n")
    if report.rows:
        writer = csv.DictWriter(buf, fieldnames=list(report.rows[0]), lineterminator="\r\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, np.generic):
        v = v.item()
    return repr(v) if isinstance(v, float) else v


# ---------------------------------------------------------------------------
# argument parsing


def _rule(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    try:
        sizes = tuple(int(p) for p in parts)
    except ValueError:
        sizes = ()
    if len(sizes) != 3 or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"expected NRxNTxNP with positive integers, got {text!r}")
    return sizes


def _radii(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from None
    if not values or any(not 0.0 <= r < 1.0 for r in values):
        raise argparse.ArgumentTypeError("radii must lie in [0, 1)")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monogenic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {"gram": 8, "monogenicity": 6, "bohr": 6, "derivative": 6}
    for name, n_default in defaults.items():
        p = sub.add_parser(name, help=COMMANDS[name].__doc__.splitlines()[0] if COMMANDS[name].__doc__ else None)
        p.add_argument("--n-max", type=int, default=n_default)
        p.add_argument("--rule", type=_rule, default=DEFAULT_RULE, help="quadrature sizes NRxNTxNP")
        p.add_argument("--seed", type=int, default=0, help="first seed of the sweep")
        p.add_argument("--seeds", type=int, default=100, help="number of seeded series")
        p.add_argument("--samples", type=int, default=20000, help="sphere samples per maximum")
        p.add_argument("--points", type=int, default=50, help="interior points for FD checks")
        p.add_argument("--radii", type=_radii, default=(), help="comma-separated radii")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        if name == "monogenicity":
            p.add_argument("--cs-phase", action="store_true", help="debug: evaluate with the Condon-Shortley phase")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.n_max < 0:
        raise ConfigurationError("--n-max must be nonnegative")
    if args.seeds < 1 or args.samples < 1 or args.points < 1:
        raise ConfigurationError("--seeds, --samples and --points must be positive")
    return RunConfig(
        command=args.command,
        n_max=args.n_max,
        rule=tuple(args.rule),
        seed=args.seed,
        seeds=args.seeds,
        samples=args.samples,
        points=args.points,
        radii=tuple(args.radii) or (DEFAULT_RADII if args.command == "derivative" else ()),
        out=args.out,
        format=args.format,
        cs_phase=getattr(args, "cs_phase", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = COMMANDS[cfg.command](cfg)
    except (MonogenicError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render_json(cfg, report) if cfg.format == "json" else render_csv(cfg, report)
    try:
        if cfg.out:
            with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = "PASS" if report.passed else "FAIL"
    print(f"{cfg.command}: {status}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VIOLATED


if __name__ == "__main__":
    sys.exit(main())
