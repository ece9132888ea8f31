"""Command-line front end: ``geomrank <command> ...``.

Exit status is 0 on success, 2 for bad input or unmet preconditions and 3
when a computation would exceed its budget.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings

from . import report as rp
from .bounds import combined_bound_report
from .catalog import CATALOG_NAMES, catalog_make
from .classifier import classify_gr2_tensor
from .errors import BudgetExceeded, GeomRankError
from .fileformat import read_tensor, write_tensor
from .genericity import GRID_BUDGET, genericity_flags, multilinear_ranks
from .grank import DEFAULT_PRIMES, ENUM_BUDGET, BadPrimeWarning, geometric_rank, stratum_counts
from .tensor import Axis, direct_sum, kronecker

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geomrank", description="Geometric rank of 3-tensors by point counting.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        return p

    with_file("info", "dimensions, multilinear ranks and genericity flags")

    p = with_file("gr", "geometric rank")
    p.add_argument("--primes", type=_int_list, default=list(DEFAULT_PRIMES))
    p.add_argument("--pairings", type=_str_list, default=["ab", "ac", "bc"])
    p.add_argument("--budget", type=int, default=ENUM_BUDGET, help="max points enumerated per prime")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    p = with_file("strata", "rank histogram of one slice space over F_p")
    p.add_argument("--axis", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--budget", type=int, default=ENUM_BUDGET)

    with_file("classify", "normal form of a geometric-rank-2 tensor")

    p = with_file("bound", "tensor-rank lower bounds")
    p.add_argument("--primes", type=_int_list, default=list(DEFAULT_PRIMES))
    p.add_argument("--budget", type=int, default=ENUM_BUDGET)

    p = sub.add_parser("gen", help=f"write a catalog tensor ({', '.join(CATALOG_NAMES)})")
    p.add_argument("name")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)

    for name, help_ in (("kron", "Kronecker product"), ("dsum", "direct sum")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("first")
        p.add_argument("second")
        p.add_argument("-o", "--output", required=True)
    return ap


def _out(args, report: dict, text: list[str]) -> None:
    if args.json:
        sys.stdout.buffer.write(rp.emit_report(report))
        sys.stdout.flush()
    else:
        print("\n".join(text))


def _cmd_info(args) -> None:
    T = read_tensor(args.file)
    ml = multilinear_ranks(T)
    flags = genericity_flags(T)
    report = rp.build_report(T, mlranks=rp.mlranks_section(ml), flags=rp.flags_section(flags))
    text = [
        f"dims {T.dims[0]} x {T.dims[1]} x {T.dims[2]}, {len(T)} nonzero entries",
        f"multilinear ranks {tuple(ml)}",
        "flags " + ", ".join(f"{k}={v}" for k, v in flags.as_dict().items()),
    ]
    _out(args, report, text)


def _cmd_gr(args) -> None:
    T = read_tensor(args.file)
    start = time.perf_counter()
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always", BadPrimeWarning)
        rep = geometric_rank(T, args.primes, args.pairings, budget=args.budget)
    elapsed = time.perf_counter() - start
    report = rp.build_report(
        T,
        gr=rp.gr_section(rep),
        strata=rp.strata_section(rep),
        budget={"enumeration": args.budget},
        warnings=list(rep.warnings),
        timing={"seconds": elapsed} if args.timing else None,
    )
    text = [
        f"GR = {rep.gr} ({'certified' if rep.certified else 'not certified'})",
        "pairings " + ", ".join(f"{k}={v}" for k, v in rep.values.items()),
        f"primes used {list(rep.primes)}" + (f", dropped {list(rep.dropped_primes)}" if rep.dropped_primes else ""),
        f"maximizing stratum {rep.max_stratum[0]} j={rep.max_stratum[1]}",
    ]
    text += [f"note: {w}" for w in rep.warnings]
    if args.timing:
        text.append(f"time {elapsed:.2f}s")
    _out(args, report, text)


def _cmd_strata(args) -> None:
    T = read_tensor(args.file)
    axis = Axis.parse(args.axis)
    prof = stratum_counts(T, axis, args.prime, args.budget)
    section = rp.profile_section(prof)
    report = rp.build_report(T, strata={axis.name: {args.prime: section}}, budget={"enumeration": args.budget})
    text = [f"axis {axis.name}, p = {args.prime}", "rank  count"]
    text += [f"{r:4d}  {c}" for r, c in enumerate(prof.counts)]
    _out(args, report, text)


def _cmd_classify(args) -> None:
    T = read_tensor(args.file)
    cls = classify_gr2_tensor(T)
    report = rp.build_report(T, classification=rp.classification_section(cls))
    text = [cls.variant.value + (f" (axis {cls.axis.name})" if cls.axis is not None else "")]
    if cls.witness is not None:
        text.append(f"factor permutation {cls.permutation}")
        for name, g in zip("ABC", cls.witness):
            text.append(f"g_{name} = {[[str(x) for x in row] for row in g.rows]}")
    _out(args, report, text)


def _cmd_bound(args) -> None:
    T = read_tensor(args.file)
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always", BadPrimeWarning)
        rep = combined_bound_report(T, args.primes, budget=args.budget)
    report = rp.build_report(
        T,
        bounds=rp.bounds_section(rep),
        gr=None if rep.gr is None else rp.gr_section(rep.gr),
        flags=None if rep.flags is None else rp.flags_section(rep.flags),
        budget={"enumeration": args.budget, "grid": GRID_BUDGET},
        warnings=rep.notes,
    )
    text = [f"R(T) >= {rep.best}"]
    for b in rep.bounds:
        text.append(f"  {b.value:4d}  {b.source.value}" + ("  (conditional)" if b.conditional else ""))
    if rep.known_rank is not None:
        text.append(f"known rank {rep.known_rank}: {'consistent' if rep.consistent else 'INCONSISTENT'}")
    text += [f"note: {n}" for n in rep.notes]
    _out(args, report, text)


def _cmd_gen(args) -> None:
    T = catalog_make(args.name, *args.params, seed=args.seed)
    write_tensor(T, args.output)


def _cmd_binary(args) -> None:
    op = kronecker if args.command == "kron" else direct_sum
    write_tensor(op(read_tensor(args.first), read_tensor(args.second)), args.output)


_COMMANDS = {
    "info": _cmd_info,
    "gr": _cmd_gr,
    "strata": _cmd_strata,
    "classify": _cmd_classify,
    "bound": _cmd_bound,
    "gen": _cmd_gen,
    "kron": _cmd_binary,
    "dsum": _cmd_binary,
}


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        _COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: BudgetExceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GeomRankError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
