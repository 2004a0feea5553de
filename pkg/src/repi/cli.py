"""Command line front end.

Four subcommands, one output shape. Every command emits rows with the
columns (alpha, method, value, n); fields that do not apply stay empty in
CSV and null in JSON. alpha = inf is spelled "inf" both on the command
line and in the output. Identical invocations produce byte-identical
output. Exit codes: 0 on success, 1 when verification reports a
violation, 2 on usage errors.

    repi constants --alpha-grid 1.5,2,inf --n 2,3
    repi compare --powers 10,20,90 --alpha-grid 1.01:10000:200
    repi filter --taps 2,-1,-1 --dim 1 --alpha 2
    repi verify --corpus two-uniforms --alpha inf
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .bounds import bc_constant, bv_bound, sharpened_constant
from .core import as_power_vector
from .filters import (
    FilterSpec,
    filter_bound_bc,
    filter_bound_bv,
    filter_bound_optimized,
    filter_bound_sharpened,
    gaussian_reference,
)
from .optimizer import optimized_constant
from .verify import certify, gaussian_density, random_corpus, uniform_density

__all__ = ["SweepSpec", "main", "entry"]

COLUMNS = ("alpha", "method", "value", "n")

#: row = (alpha or None, method, value, n or None)
Row = tuple


@dataclass(frozen=True)
class SweepSpec:
    """Parsed sweep parameters shared by the table-producing commands.

    The order grid must be non-empty, strictly increasing and entirely
    above 1; summand counts must be positive.
    """

    alphas: tuple[float, ...]
    ns: tuple[int, ...] = ()
    powers: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not self.alphas:
            raise ValueError("empty order grid")
        for a in self.alphas:
            if math.isnan(a) or a <= 1.0:
                raise ValueError(f"orders must satisfy alpha > 1, got {a!r}")
        if any(b <= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValueError("order grid must be strictly increasing")
        if any(n < 1 for n in self.ns):
            raise ValueError("summand counts must be positive")


def _parse_alpha(text: str) -> float:
    if text.strip().lower() == "inf":
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"cannot parse order {text!r}")
    if math.isnan(value) or value <= 1.0:
        raise ValueError(f"orders must satisfy alpha > 1, got {text!r}")
    return value


def _parse_alpha_grid(text: str) -> tuple[float, ...]:
    """Comma list of orders, or start:stop:count for a geometric grid."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid syntax is start:stop:count, got {text!r}")
        start, stop = _parse_alpha(parts[0]), _parse_alpha(parts[1])
        count = int(parts[2])
        if math.isinf(start) or math.isinf(stop) or count < 2:
            raise ValueError(f"geometric grids need finite ends and count >= 2, got {text!r}")
        return tuple(float(a) for a in np.geomspace(start, stop, count))
    alphas = tuple(_parse_alpha(p) for p in text.split(",") if p.strip())
    if not alphas:
        raise ValueError("empty order grid")
    return alphas


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ValueError(f"cannot parse {what} {text!r}")
    if not vals:
        raise ValueError(f"empty {what}")
    return vals


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ValueError(f"cannot parse {what} {text!r}")
    if not vals:
        raise ValueError(f"empty {what}")
    return vals


def _fmt_alpha(alpha: float | None) -> str:
    if alpha is None:
        return ""
    return "inf" if math.isinf(alpha) else repr(float(alpha))


def _json_alpha(alpha: float | None):
    if alpha is None:
        return None
    return "inf" if math.isinf(alpha) else float(alpha)


def write_csv(rows: Sequence[Row], out: IO[str]) -> None:
    out.write(",".join(COLUMNS) + "\n")
    for alpha, method, value, n in rows:
        out.write(
            f"{_fmt_alpha(alpha)},{method},{repr(float(value))},"
            f"{'' if n is None else n}\n"
        )


def write_json(rows: Sequence[Row], out: IO[str], command: str) -> None:
    doc = {
        "command": command,
        "columns": list(COLUMNS),
        "rows": [
            {
                "alpha": _json_alpha(alpha),
                "method": method,
                "value": float(value),
                "n": None if n is None else int(n),
            }
            for alpha, method, value, n in rows
        ],
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def cmd_constants(spec: SweepSpec) -> list[Row]:
    """The n-aware constant per requested n, and the n-free limit column."""
    rows: list[Row] = []
    for alpha in spec.alphas:
        for n in spec.ns:
            rows.append((alpha, "sharpened", sharpened_constant(alpha, n), n))
        rows.append((alpha, "bc", bc_constant(alpha), None))
    return rows


def cmd_compare(spec: SweepSpec) -> list[Row]:
    """Every lower bound on the entropy power of the sum, per order."""
    pv = as_power_vector(spec.powers)
    total = pv.total
    n = len(pv)
    rows: list[Row] = []
    for alpha in spec.alphas:
        rows.append((alpha, "bc", bc_constant(alpha) * total, n))
        rows.append((alpha, "sharpened", sharpened_constant(alpha, n) * total, n))
        rows.append((alpha, "optimized", optimized_constant(pv, alpha) * total, n))
        rows.append((alpha, "bv", bv_bound(pv), n))
    return rows


def cmd_filter(taps: tuple[float, ...], dim: int, alpha: float) -> list[Row]:
    """All four output-entropy bounds plus the Gaussian reference, in nats."""
    spec = FilterSpec(taps, dim, alpha)  # type: ignore[arg-type]
    rows: list[Row] = [
        (alpha, "optimized", filter_bound_optimized(spec), None),
        (alpha, "sharpened", filter_bound_sharpened(spec), None),
        (alpha, "bc", filter_bound_bc(spec), None),
        (alpha, "bv", filter_bound_bv(spec), None),
    ]
    if dim == 1:
        rows.append((alpha, "gaussian", gaussian_reference(spec), None))
    return rows


def cmd_verify(
    corpus: str, alpha: float, seed: int, count: int, slack: float
) -> tuple[list[Row], int]:
    """Certification sweep; returns rows and the number of violating instances.

    Each instance contributes a measured power ratio row and a margin row
    holding the minimum slack across all four checks (margins below
    ``-slack`` are violations). A trailing row counts violating instances.
    """
    if corpus == "two-uniforms":
        u = uniform_density(0.0, 1.0)
        instances = [((u, u), alpha)]
    elif corpus == "two-gaussians":
        g = gaussian_density(0.0, 1.0)
        instances = [((g, g), alpha)]
    elif corpus == "default":
        instances = [(inst.densities, inst.order.alpha) for inst in random_corpus(seed, count)]
    else:
        raise ValueError(f"unknown corpus {corpus!r}")
    rows: list[Row] = []
    violations = 0
    for densities, a in instances:
        cert = certify(densities, a, slack=slack)
        if not cert.ok:
            violations += 1
        rows.append((a, "ratio", cert.ratio, len(densities)))
        rows.append((a, "margin", min(cert.margins().values()), len(densities)))
    rows.append((None, "violations", float(violations), None))
    return rows, violations


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repi",
        description="Lower bounds on Renyi entropy powers of sums of independent random vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default="-", metavar="PATH", help="output path, - for stdout")

    p = sub.add_parser("constants", help="n-aware and n-free constants over an order grid")
    p.add_argument("--alpha-grid", required=True, metavar="GRID")
    p.add_argument("--n", default="2", metavar="LIST")
    add_io(p)

    p = sub.add_parser("compare", help="all lower bounds for one power vector")
    p.add_argument("--alpha-grid", required=True, metavar="GRID")
    p.add_argument("--powers", required=True, metavar="LIST")
    add_io(p)

    p = sub.add_parser("filter", help="output entropy bounds for a linear filter")
    p.add_argument("--taps", required=True, metavar="LIST")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--alpha", required=True)
    add_io(p)

    p = sub.add_parser("verify", help="numerical certification on grid densities")
    p.add_argument("--corpus", choices=("default", "two-uniforms", "two-gaussians"), default="default")
    p.add_argument("--alpha", default="2", help="order for the two-summand corpora")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--slack", type=float, default=1e-4, help="tolerance on every check")
    add_io(p)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        exit_code = 0
        if args.command == "constants":
            spec = SweepSpec(
                alphas=_parse_alpha_grid(args.alpha_grid),
                ns=_parse_ints(args.n, "summand counts"),
            )
            rows = cmd_constants(spec)
        elif args.command == "compare":
            spec = SweepSpec(
                alphas=_parse_alpha_grid(args.alpha_grid),
                powers=_parse_floats(args.powers, "powers"),
            )
            rows = cmd_compare(spec)
        elif args.command == "filter":
            rows = cmd_filter(
                _parse_floats(args.taps, "taps"), args.dim, _parse_alpha(args.alpha)
            )
        else:
            if args.count < 1:
                raise ValueError("corpus count must be positive")
            rows, violations = cmd_verify(
                args.corpus, _parse_alpha(args.alpha), args.seed, args.count, args.slack
            )
            exit_code = 1 if violations else 0
    except ValueError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")

    if args.out == "-":
        _write(rows, sys.stdout, args.format, args.command)
    else:
        with open(args.out, "w", newline="") as fh:
            _write(rows, fh, args.format, args.command)
    return exit_code


def _write(rows: list[Row], out: IO[str], fmt: str, command: str) -> None:
    if fmt == "csv":
        write_csv(rows, out)
    else:
        write_json(rows, out, command)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
