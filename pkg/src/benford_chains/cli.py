"""Command-line front end: bounds, fold probabilities, densities,
simulation, and dataset audits as reproducible batch commands.

Every run echoes its full resolved configuration (defaults included,
plus the RNG algorithm identifier) into the output: a "config" object in
JSON outputs, '#'-prefixed comment lines ahead of the header in CSV
outputs.  All floats are printed with 17 significant digits so outputs
round-trip doubles exactly and identical command lines give byte-
identical bytes.

Exit codes: 0 success, 2 invalid input or chain spec, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .chains import (
    ChainSpecError,
    FoldInterval,
    deviation_bound,
    exponential_chain_bound,
    first_digit_probabilities,
    fold_probability,
    load_chain,
    uniform_chain_cdf_terms,
    uniform_chain_density,
)
from .conformance import audit_dataset, benford_digit_prob
from .families import NonConvergenceError
from .montecarlo import RNG_ALGORITHM, batch_mantissas, sample_batch

__all__ = ["main"]


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if math.isnan(x):
        return "NaN"
    return format(float(x), ".17g")


def _to_json(obj) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_to_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_to_json(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _print_json(obj, out) -> None:
    out.write(_to_json(obj) + "\n")


def _csv_header(config: dict, columns: str, out) -> None:
    for key, value in config.items():
        out.write(f"# {key}={value}\n")
    out.write(columns + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benford-chains",
        description="Benford deviation bounds, fold probabilities, and audits "
        "for chained scale-family distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="rigorous deviation bound for a chain")
    p.add_argument("--chain", required=True, help="chain-spec JSON path")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--lmax", type=int, default=64)

    p = sub.add_parser("bound-exp", help="closed-form bound for exponential chains")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, default=10)

    p = sub.add_parser("bound-uniform", help="closed-form CDF bound for uniform chains")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--s", type=float, required=True)

    p = sub.add_parser("fold", help="probability of the folded log landing in [a, b]")
    p.add_argument("--chain", required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--lmax", type=int, default=64)

    p = sub.add_parser("digits", help="leading-digit probabilities of a chain (CSV)")
    p.add_argument("--chain", required=True)
    p.add_argument("--lmax", type=int, default=64)

    p = sub.add_parser("density-uniform", help="uniform-chain density on a grid (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--points", type=int, default=200)

    p = sub.add_parser("simulate", help="draw chain samples to CSV, stats JSON on stdout")
    p.add_argument("--chain", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="sample CSV output path")

    p = sub.add_parser("audit", help="Benford conformance report for a CSV dataset")
    p.add_argument("--input", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--column", help="column name (implies a header row)")
    group.add_argument("--col-index", type=int, help="0-based column index")
    p.add_argument("--header", action="store_true", help="input has a header row")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--bound", type=float, default=None, help="analytic bound for context")
    p.add_argument("--grid", type=int, default=1000)

    return parser


def _cmd_bound(args, out) -> int:
    chain = load_chain(args.chain)
    result = deviation_bound(chain, FoldInterval(args.a, args.b), args.lmax)
    _print_json(
        {
            "value": result.value,
            "truncation_L": result.truncation_L,
            "tail": result.tail,
            "per_term": [[ell, m] for ell, m in result.per_term],
            "config": _config(args, chain=args.chain, a=args.a, b=args.b, lmax=args.lmax),
        },
        out,
    )
    return 0


def _cmd_bound_exp(args, out) -> int:
    value = exponential_chain_bound(args.n, args.base)
    _print_json(
        {
            "value": value,
            "envelope": 0.057**args.n,
            "n": args.n,
            "base": args.base,
            "config": _config(args, n=args.n, base=args.base),
        },
        out,
    )
    return 0


def _cmd_bound_uniform(args, out) -> int:
    head, spectral = uniform_chain_cdf_terms(args.n, args.k, args.s)
    _print_json(
        {
            "value": head + spectral,
            "head_term": head,
            "spectral_term": spectral,
            "n": args.n,
            "k": args.k,
            "s": args.s,
            "config": _config(args, n=args.n, k=args.k, s=args.s),
        },
        out,
    )
    return 0


def _cmd_fold(args, out) -> int:
    chain = load_chain(args.chain)
    prob, err = fold_probability(chain, FoldInterval(args.a, args.b), args.lmax)
    _print_json(
        {
            "probability": prob,
            "truncation_error": err,
            "config": _config(args, chain=args.chain, a=args.a, b=args.b, lmax=args.lmax),
        },
        out,
    )
    return 0


def _cmd_digits(args, out) -> int:
    chain = load_chain(args.chain)
    probs = first_digit_probabilities(chain, args.lmax)
    _csv_header(
        _config(args, chain=args.chain, lmax=args.lmax),
        "d,probability,benford,delta",
        out,
    )
    for d, p in enumerate(probs, start=1):
        bp = benford_digit_prob(d, chain.base)
        out.write(f"{d},{_fmt(p)},{_fmt(bp)},{_fmt(p - bp)}\n")
    return 0


def _cmd_density_uniform(args, out) -> int:
    if args.points < 2:
        raise ValueError(f"--points must be >= 2, got {args.points}")
    _csv_header(
        _config(args, n=args.n, k=args.k, points=args.points),
        "x,f",
        out,
    )
    # Geometric grid over three decades up to k, endpoint included.
    p = args.points
    for j in range(1, p + 1):
        x = args.k * 10.0 ** (-3.0 * (p - j) / (p - 1))
        f = uniform_chain_density(args.n, args.k, x)
        out.write(f"{_fmt(x)},{_fmt(f)}\n")
    return 0


def _cmd_simulate(args, out) -> int:
    chain = load_chain(args.chain)
    if args.samples < 1:
        raise ValueError(f"--samples must be >= 1, got {args.samples}")
    batch = sample_batch(chain, args.samples, args.seed)
    mants = batch_mantissas(batch.values, chain.base)
    digits = mants.astype(int)
    config = _config(
        args, chain=args.chain, samples=args.samples, seed=args.seed, out=args.out
    )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        _csv_header(config, "index,value,mantissa,first_digit", fh)
        for i in range(batch.count):
            fh.write(f"{i},{_fmt(batch.values[i])},{_fmt(mants[i])},{digits[i]}\n")
    _print_json(
        {
            "requested": args.samples,
            "count": batch.count,
            "failures": batch.failures,
            "failure_rate": batch.failures / args.samples,
            "out": args.out,
            "config": config,
        },
        out,
    )
    return 0


def _read_csv_column(path: str, column: str | None, col_index: int | None, header: bool):
    """One numeric column from a CSV file; unparsable cells become NaN.

    Lines starting with '#' (our own config echo) and blank lines are
    skipped before CSV parsing.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = csv.reader(
            line for line in fh if line.strip() and not line.lstrip().startswith("#")
        )
        idx = 0
        if column is not None:
            try:
                head = next(rows)
            except StopIteration:
                raise ValueError(f"{path}: empty input") from None
            names = [c.strip() for c in head]
            if column not in names:
                raise ValueError(f"{path}: no column named {column!r} in {names}")
            idx = names.index(column)
        else:
            if col_index is not None:
                idx = col_index
            if header:
                next(rows, None)
        values = []
        for row in rows:
            try:
                values.append(float(row[idx]))
            except (ValueError, IndexError):
                values.append(math.nan)
    if not values:
        raise ValueError(f"{path}: no data rows")
    return values


def _cmd_audit(args, out) -> int:
    values = _read_csv_column(args.input, args.column, args.col_index, args.header)
    report = audit_dataset(values, args.base, args.bound, args.grid)
    _print_json(
        {
            "config": _config(
                args,
                input=args.input,
                column=args.column,
                col_index=args.col_index,
                header=bool(args.header or args.column is not None),
                base=args.base,
                bound=args.bound,
                grid=args.grid,
            ),
            "report": report.to_json_dict(),
        },
        out,
    )
    return 0


def _config(args, **flags) -> dict:
    cfg = {"command": args.command}
    cfg.update(flags)
    cfg["rng"] = RNG_ALGORITHM
    return cfg


_DISPATCH = {
    "bound": _cmd_bound,
    "bound-exp": _cmd_bound_exp,
    "bound-uniform": _cmd_bound_uniform,
    "fold": _cmd_fold,
    "digits": _cmd_digits,
    "density-uniform": _cmd_density_uniform,
    "simulate": _cmd_simulate,
    "audit": _cmd_audit,
}


def main(argv=None, out=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    if out is None:
        out = sys.stdout
    try:
        return _DISPATCH[args.command](args, out)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ChainSpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
