"""Command line entry point.

    qhred COMMAND [--alpha A] [--k K] [--cutoff W] [--format text|json] [--out PATH] ...

Exit status: 0 when every check passes (or reduces to the ideal), 1 when a
verification fails, 2 for usage and configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import QhredError
from .reduction import SV_POINT, Reduction
from .report import FAIL, PASS, Check, Report
from .scalars import render_scalar
from .textio import parse_fraction
from .walgebras import BracketTable, parse_table

COMMANDS = (
    "central-charge",
    "reduce",
    "verify-sw",
    "verify-sv",
    "screenings",
    "kernel-dims",
    "axioms",
    "structure",
    "closedness",
    "golden",
)

MIN_CUTOFF = Fraction(1, 2)
MAX_CUTOFF = Fraction(5)


class ConfigParse(QhredError, ValueError):
    """Malformed command line values."""


@dataclass
class RunConfig:
    command: str
    alpha: Fraction | None = None
    k: Fraction | None = None
    c: Fraction | None = None
    epsilon: Fraction | None = None
    cutoff: Fraction | None = None
    fmt: str = "text"
    out: str | None = None
    table: str | None = None
    seed: int = 0
    points: int = 0
    basis: str = "sw"
    samples: int = 100
    timing: bool = False
    verbose: bool = False


def _param(text: str | None) -> Fraction | None:
    if text is None or text == "symbolic":
        return None
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError, QhredError):
        raise ConfigParse(f"not an exact rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhred", description="Lambda-bracket verification of the D(2,1;alpha) reduction.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--alpha", help="exact rational or 'symbolic'")
    p.add_argument("--k", help="exact rational or 'symbolic'")
    p.add_argument("--c", help="central charge of the SW table (verify-sw)")
    p.add_argument("--epsilon", help="coupling of the SW table (verify-sw)")
    p.add_argument("--cutoff", help="weight cutoff, between 1/2 and 5")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the output here instead of stdout")
    p.add_argument("--table", help="bracket-table file replacing the shipped one")
    p.add_argument("--seed", type=int, default=0, help="seed for random points and words")
    p.add_argument("--points", type=int, default=0, help="verify-sw: check N random points instead of symbolic parameters")
    p.add_argument("--basis", choices=("sw", "sv"), default="sw", help="reduce: generator basis")
    p.add_argument("--samples", type=int, default=100, help="axioms: random cases per identity")
    p.add_argument("--timing", action="store_true", help="include timings in JSON output")
    p.add_argument("-v", "--verbose", action="store_true", help="text output lists every check")
    return p


VALUE_FLAGS = ("--alpha", "--k", "--c", "--epsilon", "--cutoff")


def _glue_negative(argv: list[str]) -> list[str]:
    """Turn ``--k -2/3`` into ``--k=-2/3``; argparse takes -2/3 for a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if a in VALUE_FLAGS and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{a}={nxt}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_glue_negative(argv))
    cfg = RunConfig(
        command=ns.command,
        alpha=_param(ns.alpha),
        k=_param(ns.k),
        c=_param(ns.c),
        epsilon=_param(ns.epsilon),
        cutoff=_param(ns.cutoff),
        fmt=ns.fmt,
        out=ns.out,
        table=ns.table,
        seed=ns.seed,
        points=ns.points,
        basis=ns.basis,
        samples=ns.samples,
        timing=ns.timing,
        verbose=ns.verbose,
    )
    if cfg.cutoff is not None and not (MIN_CUTOFF <= cfg.cutoff <= MAX_CUTOFF):
        raise ConfigParse(f"cutoff must lie in [1/2, 5], got {cfg.cutoff}")
    if (cfg.alpha is None) != (cfg.k is None) and cfg.command not in ("structure",):
        raise ConfigParse("give both --alpha and --k, or neither")
    if cfg.points < 0 or cfg.samples < 1:
        raise ConfigParse("--points and --samples must be positive")
    return cfg


def _table(cfg: RunConfig) -> tuple[BracketTable | None, str]:
    if cfg.table is None:
        return None, ""
    try:
        text = Path(cfg.table).read_text()
    except OSError as exc:
        raise ConfigParse(f"cannot read table: {exc}") from None
    return parse_table(text, Path(cfg.table).stem), text


def _reduce(cfg: RunConfig) -> Report:
    alpha, k = cfg.alpha, cfg.k
    if cfg.basis == "sv":
        if alpha is None:
            alpha, k = SV_POINT
        if (alpha, k) != SV_POINT:
            raise ConfigParse("--basis sv needs alpha = 1, k = -2/3")
    red = Reduction(alpha, k)
    g = red.generators
    rep = Report("reduce", info={"alpha": "symbolic" if alpha is None else str(alpha), "k": "symbolic" if k is None else str(k), "basis": cfg.basis})
    fields = red.sv_change_of_basis() if cfg.basis == "sv" else g.as_dict()
    rep.info["fields"] = {n: F.render() for n, F in fields.items()}
    rep.info["scalars"] = {"c": render_scalar(g.c), "eps": render_scalar(g.eps), "mu": render_scalar(g.mu)}
    for n, F in fields.items():
        d = red.d0_red(F)
        rep.add(Check(f"d0({n}) = 0", PASS if d.is_zero() else FAIL, d.render() if d else ""))
    if cfg.basis == "sv":
        from .suites import sv_fields

        for n, F in sv_fields(red).items():
            d = F - fields[n]
            rep.add(Check(f"{n} matches the displayed field", PASS if d.is_zero() else FAIL, d.render() if d else ""))
    return rep


def run(cfg: RunConfig) -> Report:
    from . import suites

    cmd = cfg.command
    if cmd == "central-charge":
        return suites.central_charge_suite(cfg.alpha, cfg.k)
    if cmd == "reduce":
        return _reduce(cfg)
    if cmd == "verify-sw":
        table, _ = _table(cfg)
        if cfg.points:
            return suites.sw_points_suite(cfg.points, cfg.seed, table)
        return suites.sw_suite(cfg.alpha, cfg.k, table=table, c=cfg.c, eps=cfg.epsilon)
    if cmd == "verify-sv":
        table, _ = _table(cfg)
        return suites.sv_suite(cfg.cutoff or Fraction(4), table)
    if cmd == "screenings":
        if cfg.alpha is not None:
            pts = [(cfg.alpha, cfg.k)]
        else:
            pts = suites.random_points(3, cfg.seed) + [SV_POINT]
        return suites.screenings_suite(pts)
    if cmd == "kernel-dims":
        cutoff = cfg.cutoff or Fraction(3)
        if cutoff > 3:
            raise ConfigParse("kernel-dims supports cutoffs up to 3")
        a, k = (cfg.alpha, cfg.k) if cfg.alpha is not None else suites.random_points(1, cfg.seed)[0]
        return suites.kernel_suite(a, k, cutoff)
    if cmd == "axioms":
        from .axioms import run_axioms

        return run_axioms(cfg.seed, cfg.samples, cfg.cutoff or Fraction(5, 2))
    if cmd == "structure":
        return suites.structure_suite(cfg.alpha)
    if cmd == "closedness":
        return suites.closedness_suite(cfg.alpha, cfg.k, cfg.cutoff or Fraction(5, 2))
    if cmd == "golden":
        return suites.golden_suite()
    raise ConfigParse(f"unknown command {cmd}")


def render(rep: Report, cfg: RunConfig) -> str:
    if cfg.fmt == "json":
        return rep.to_json(timing=cfg.timing) + "\n"
    if cfg.command == "central-charge" and not cfg.verbose:
        return rep.info["c"] + "\n"
    if cfg.command == "reduce" and not cfg.verbose:
        lines = [f"{n} = {s}" for n, s in rep.info["fields"].items()]
        if not rep.ok:
            lines.append(f"reduce: {rep.status}")
        return "\n".join(lines) + "\n"
    if cfg.verbose:
        return rep.to_text() + "\n"
    lines = [f"{rep.suite}: {rep.status} ({len(rep.checks)} checks)"]
    for ch in rep.checks:
        if ch.status != PASS:
            lines.append(f"  [{ch.status}] {ch.ident}")
            if ch.residual:
                lines.append(f"      residual: {ch.residual}")
    return "\n".join(lines) + "\n"


def _digest_inputs(cfg: RunConfig) -> list[str]:
    parts = [cfg.command]
    for key in ("alpha", "k", "c", "epsilon", "cutoff", "seed", "points", "basis", "samples"):
        parts.append(f"{key}={getattr(cfg, key)}")
    if cfg.table:
        parts.append(Path(cfg.table).read_text())
    return parts


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        rep = run(cfg)
    except (QhredError, ValueError, ZeroDivisionError) as exc:
        print(f"qhred: error: {exc}", file=sys.stderr)
        return 2
    from .report import digest

    rep.input_digest = digest(*_digest_inputs(cfg))
    text = render(rep, cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
