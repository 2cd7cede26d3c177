"""Command-line front end.

Exit codes: 0 success, 1 a check failed (or ``pit`` found a nonzero
polynomial), 2 unreadable input or bad arguments.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abp import Abp
from .field import DEFAULT_PRIME, FieldError, check_modulus
from .formula import Formula, NonMultilinear
from .hardpoly import (
    gen_dmpy,
    gen_pry,
    gen_ry,
    random_interval_formula,
    random_lambda,
    random_roabp,
    random_rof,
    random_strict_interval_abp,
    random_w,
)
from .partitions import (
    BlockStructure,
    PartitionError,
    sample_arc_partition,
    sample_db,
    sample_equipartition,
)
from .pit import roabp_pit, strict_interval_pit, verify_witness
from .poly import MultilinearPoly
from .rank import RankCapExceeded, log_deficit, rank_of
from .rng import SplitMix64
from .serialize import SchemaError, formula_to_json, load_any, load_model, write_json
from .transforms import TransformError, depth_bound, depth_reduce_interval, strict_interval_to_roabp
from .validate import (
    check_interval_formula,
    check_oblivious_roabp,
    check_read_k,
    check_rof,
    check_strict_interval,
    check_syntactic_multilinear,
)


class CliError(Exception):
    """Reported on stderr with exit code 2."""


def _read(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _model_to_json(m) -> dict:
    return formula_to_json(m) if isinstance(m, Formula) else m.to_json()


def _load_model(path: str):
    data = _read(path)
    try:
        return load_model(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: invalid model: {exc}") from None


# subcommands

def cmd_gen_poly(a) -> int:
    p, n = a.prime, a.n
    if a.family == "ry":
        f = gen_ry(list(range(n)), random_w(list(range(n)), SplitMix64(a.seed), p), n, p)
    elif a.family == "pry":
        bs = BlockStructure(n, a.r)
        rng = SplitMix64(a.seed)
        W = {}
        for block in bs.blocks:
            W.update(random_w(block, rng, p))
        f = gen_pry(bs, W, p)
    else:
        f = gen_dmpy(n, random_lambda(n, a.seed, p), p)
    write_json(a.out, f.to_json())
    return 0


def cmd_gen_model(a) -> int:
    p, n = a.prime, a.n
    if a.family == "rof":
        m = random_rof(n, a.seed, p)
    elif a.family == "roabp":
        m = random_roabp(n, a.width, a.seed, p)
    elif a.family == "interval-formula":
        m = random_interval_formula(n, a.size, a.seed, p)
    else:
        m = random_strict_interval_abp(n, a.size, a.seed, p)
    write_json(a.out, _model_to_json(m))
    return 0


def cmd_rank(a) -> int:
    f = load_any(_read(a.poly))
    if not isinstance(f, MultilinearPoly):
        raise CliError(f"{a.poly}: expected a polynomial")
    pdata = _read(a.partition)
    phi = load_any(pdata if "n" in pdata else {**pdata, "n": f.n})
    r = rank_of(f, phi)
    out = {"rank": r}
    d = log_deficit(f.n, r)
    if d is not None:
        out["logdeficit"] = d
    write_json(a.out, out)
    return 0


def cmd_sample_partition(a) -> int:
    if a.dist == "equi":
        out = sample_equipartition(a.n, a.seed).to_json()
    elif a.dist == "db":
        out = sample_db(BlockStructure(a.n, a.r), a.seed).to_json()
    else:
        pairing, phi = sample_arc_partition(a.n, a.seed)
        out = {**phi.to_json(), "pairs": pairing.to_json()["pairs"]}
    write_json(a.out, out)
    return 0


def cmd_convert(a) -> int:
    P = _load_model(a.inp)
    if not isinstance(P, Abp):
        raise CliError(f"{a.inp}: convert needs an ABP")
    R = strict_interval_to_roabp(P)
    write_json(a.out, R.to_json())
    if a.emit_stats:
        stats = {"n": P.n, "in_size": P.size, "in_width": P.width, "out_size": R.size, "out_width": R.width,
                 "bound": 2 * P.n * P.size}
        sys.stderr.write(json.dumps(stats, sort_keys=True) + "\n")
    return 0


def cmd_depth_reduce(a) -> int:
    F = _load_model(a.inp)
    if not isinstance(F, Formula):
        raise CliError(f"{a.inp}: depth-reduce needs a formula")
    G = depth_reduce_interval(F)
    if a.verify:
        problems = []
        if G.expand() != F.expand():
            problems.append("expansion differs from the input")
        if not check_interval_formula(G).verdict:
            problems.append("output is not an interval formula")
        if G.depth > depth_bound(F.size):
            problems.append(f"depth {G.depth} exceeds {depth_bound(F.size):.2f}")
        if problems:
            sys.stderr.write("verification failed: " + "; ".join(problems) + "\n")
            return 1
    write_json(a.out, formula_to_json(G))
    return 0


def cmd_pit(a) -> int:
    P = _load_model(a.inp)
    if not isinstance(P, Abp):
        raise CliError(f"{a.inp}: pit needs an ABP")
    if check_oblivious_roabp(P).verdict:
        res = roabp_pit(P)
    else:
        res = strict_interval_pit(P)
    if not verify_witness(P, res):
        raise AssertionError("witness failed to verify")
    write_json(a.out, res.to_json())
    return 0 if res.zero else 1


def _report(rep) -> dict:
    out = {"pass": rep.verdict}
    if rep.witness is not None:
        out["witness"] = rep.witness
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def cmd_validate(a) -> int:
    data = _read(a.inp)
    try:
        obj = load_any(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{a.inp}: {exc}") from None
    checks: dict = {}
    if isinstance(obj, Formula):
        checks["syntactic_multilinear"] = _report(check_syntactic_multilinear(obj))
        checks["read_once"] = _report(check_rof(obj))
        checks["read_k"] = check_read_k(obj)
        checks["interval_formula"] = _report(check_interval_formula(obj))
        kind = "formula"
    elif isinstance(obj, Abp):
        checks["syntactic_multilinear"] = _report(check_syntactic_multilinear(obj))
        ro = check_oblivious_roabp(obj)
        checks["roabp"] = _report(ro)
        if ro.verdict:
            checks["roabp"]["order"] = ro.data["order"]
        si = check_strict_interval(obj)
        checks["strict_interval"] = _report(si)
        kind = "abp"
    else:
        kind = type(obj).__name__.lower()
        checks["parsed"] = {"pass": True}
    write_json(a.out, _jsonable({"kind": kind, "checks": checks}))
    return 0


def cmd_experiment(a) -> int:
    from .experiments import report_csv, report_json, run_experiment

    params = {}
    for item in a.param or []:
        if "=" not in item:
            raise CliError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    rep = run_experiment(a.name, params, seed=a.seed, prime=a.prime, threads=a.threads)
    text = report_json(rep)
    if a.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if a.csv:
        with open(a.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report_csv(rep))
    return 0 if rep["ok"] else 1


# argument parsing

def _prime(text: str) -> int:
    try:
        return check_modulus(int(text))
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--prime", type=_prime, default=d(DEFAULT_PRIME), help="field modulus (default 2^31-1)")
    parser.add_argument("--seed", type=int, default=d(0), help="base seed")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads for experiment trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boundedread", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        return sp

    sp = add("gen-poly", cmd_gen_poly, "generate an explicit polynomial")
    sp.add_argument("--family", choices=["ry", "pry", "dmpy"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, default=4, help="block size for pry")

    sp = add("gen-model", cmd_gen_model, "generate a random model")
    sp.add_argument("--family", choices=["rof", "roabp", "interval-formula", "strict-interval-abp"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--size", type=int, default=20)
    sp.add_argument("--width", type=int, default=3)

    sp = add("rank", cmd_rank, "rank of the partial derivative matrix")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--partition", required=True)

    sp = add("sample-partition", cmd_sample_partition, "draw a random partition")
    sp.add_argument("--dist", choices=["equi", "db", "arc"], default="equi")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, default=4)

    sp = add("convert", cmd_convert, "strict-interval ABP to ROABP")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--emit-stats", action="store_true", help="print size statistics on stderr")

    sp = add("depth-reduce", cmd_depth_reduce, "balance an interval formula")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--verify", action="store_true", help="check the output against the input")

    sp = add("pit", cmd_pit, "identity test for ROABPs and strict-interval ABPs")
    sp.add_argument("--in", dest="inp", required=True)

    sp = add("validate", cmd_validate, "run every applicable structural check")
    sp.add_argument("inp", metavar="FILE")

    sp = add("experiment", cmd_experiment, "run a named experiment suite")
    sp.add_argument("name")
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")
    sp.add_argument("--csv", default=None, help="also write a per-trial CSV")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (SchemaError, TransformError, PartitionError, RankCapExceeded, NonMultilinear, FieldError,
            ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
