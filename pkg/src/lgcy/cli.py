"""Command-line driver: ``lgcy <command> [flags]``.

Exit status is 0 when every check of the command passes, 1 when a check
fails (the report is still written) and 2 for invalid flags.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional

from . import fukaya, mfcat, mirror, orlov, ring
from .qseries import qexp

COMMANDS = ("potential", "mf-check", "orlov", "fukaya-count", "theta", "diagram")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    cutoff: Fraction
    degree_bound: int = 6
    index: int = 0
    output: str = "json"
    target: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command}")
        if self.cutoff <= 0:
            raise UsageError("cutoff must be positive")
        if self.degree_bound < 0:
            raise UsageError("degree bound must be non-negative")


def parse_rational(text: str) -> Fraction:
    try:
        return qexp(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {text!r}") from exc


def parse_target(text: str) -> fukaya.LinearLagrangian:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise UsageError("target must be 'a,b' or 'a,b,c'")
    try:
        a, b = int(parts[0]), int(parts[1])
        c = parse_rational(parts[2]) if len(parts) == 3 else Fraction(0)
        return fukaya.LinearLagrangian.line(a, b, c, name=f"L({a},{b})")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands return (report, passed)

def _potential(cfg: RunConfig):
    bundle = ring.build_W(cfg.cutoff)
    return {"command": "potential", "bundle": bundle.to_json()}, True


def _mf_check(cfg: RunConfig):
    out, ok = {}, True
    for which in (0, 1):
        M = orlov.displayed_mf(which, cfg.cutoff)
        problems = mfcat.mf_diagnose(M)
        out[f"M{which}"] = {"valid": not problems, "problems": problems,
                            "P0": list(M.P0), "P1": list(M.P1)}
        ok = ok and not problems
    return {"command": "mf-check", "cutoff": str(cfg.cutoff), "factorizations": out}, ok


def _orlov(cfg: RunConfig):
    out, ok = {}, True
    for which, build in ((0, orlov.cone_phi), (1, orlov.resolution_A1)):
        tail = orlov.extract_periodic_tail(build(cfg.cutoff))
        match = tail.agrees(orlov.displayed_mf(which, cfg.cutoff), cfg.cutoff)
        out[f"M{which}"] = {"tail": tail.to_json(), "equals_displayed": match}
        ok = ok and match
    return {"command": "orlov", "cutoff": str(cfg.cutoff), "tails": out}, ok


def _fukaya_count(cfg: RunConfig):
    S = fukaya.SeidelConfig()
    if cfg.target is None:
        W = ring.build_W(cfg.cutoff).W
        counts, ok = {}, True
        for r in range(3):
            counts[f"e{r}"] = fukaya.enumerate_decorated_polygons(S, r, cfg.cutoff).to_json()
            ok = ok and fukaya.potential_from_polygons(S, r, cfg.cutoff).agrees(W, cfg.cutoff)
        return {"command": "fukaya-count", "target": None, "polygons": counts, "equals_W": ok}, ok
    L = parse_target(cfg.target)
    try:
        fukaya.branch_index(L)
        moved = None
    except fukaya.TransversalityError:
        image = fukaya.apply_symplectomorphism(cfg.index, L)
        moved = image.to_json()
        L = image.lagrangian
    strip = fukaya.strip_matrix(S, L, cfg.cutoff)
    counts = fukaya.CountSeries(strip.cutoff)
    names = (strip.even, strip.odd)
    for block, (src, tgt) in ((strip.p0, (0, 1)), (strip.p1, (1, 0))):
        for a in range(4):
            for b in range(4):
                for mono, ser in block[a, b].items():
                    key = (f"{names[src][b]}->{names[tgt][a]}", fukaya._mono_key(mono))
                    counts.series[key] = ser
    M = mirror.mf_shift_by(mirror.grade_mf(fukaya.strip_matrix(S, _unshifted(L), cfg.cutoff)), L.shift)
    ok = mfcat.mf_validate(M)
    report = {"command": "fukaya-count", "target": L.to_json(), "symplectomorphism": moved,
              "strips": counts.to_json(), "generators": strip.to_json()["generators"],
              "matrix_factorization": {"P0": list(M.P0), "P1": list(M.P1), "valid": ok}}
    return report, ok


def _unshifted(L):
    return replace(L, shift=0)


def _theta(cfg: RunConfig):
    ok = fukaya.addition_formula_check(cfg.cutoff)
    series = {str(c): fukaya.theta_series(c, cfg.cutoff).to_json() for c in (Fraction(0), Fraction(1, 2))}
    return {"command": "theta", "cutoff": str(cfg.cutoff), "theta": series, "addition_formula": ok}, ok


def _diagram(cfg: RunConfig):
    rep = mirror.diagram_check(cfg.index, cfg.cutoff, cfg.degree_bound)
    image = fukaya.apply_symplectomorphism(cfg.index, fukaya.pz_lagrangian(1, 3 * cfg.index))
    rep = dict(rep, symplectomorphism=image.to_json())
    return rep, rep["pass"]


HANDLERS = {"potential": _potential, "mf-check": _mf_check, "orlov": _orlov,
            "fukaya-count": _fukaya_count, "theta": _theta, "diagram": _diagram}


def run(cfg: RunConfig):
    return HANDLERS[cfg.command](cfg)


def _text(report, indent=0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(report, list):
        if not any(isinstance(v, dict) for v in report):
            return [pad + json.dumps(report)]
        for v in report:
            if isinstance(v, (dict, list)):
                lines.extend(_text(v, indent))
                lines.append(pad + "-")
            else:
                lines.append(f"{pad}{v}")
    else:
        lines.append(f"{pad}{report}")
    return lines


def render(report, output: str) -> str:
    if output == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text(report)) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lgcy", description="LG/CY and Fukaya-side verification pipelines")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--cutoff", default="200", help="exact rational exponent cutoff")
    p.add_argument("--degree-bound", type=int, default=6)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--target", default=None, help="line (c,0)+t(a,b) given as 'a,b,c'")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.command, parse_rational(args.cutoff), args.degree_bound,
                        args.index, args.output, args.target)
        if cfg.target is not None:
            parse_target(cfg.target)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    try:
        report, ok = run(cfg)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except (fukaya.TransversalityError, fukaya.ParallelLinesError, mfcat.GradingError) as exc:
        report, ok = {"command": cfg.command, "error": str(exc)}, False
    sys.stdout.write(render(report, cfg.output))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
