"""Named experiment suites producing deterministic JSON reports.

Trial ``i`` of a run with seed ``seed`` draws all of its randomness from
``derive_seed(seed, i)``, so the thread count never changes a report.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from . import __version__
from .field import DEFAULT_PRIME
from .hardpoly import (
    enum_arc_pairings,
    gen_dmpy,
    gen_dmpy_smabp,
    gen_pry,
    gen_ry,
    random_interval_formula,
    random_lambda,
    random_roabp,
    random_rof,
    random_strict_interval_abp,
    random_tags,
    random_w,
)
from .partitions import BlockStructure, all_equipartitions, partition_from_pairing, sample_db
from .pit import roabp_pit, strict_interval_pit, verify_witness
from .rank import log_deficit, rank_of
from .rng import SplitMix64, derive_seed
from .transforms import depth_bound, depth_reduce_interval, strict_interval_to_roabp, sum_roabps
from .validate import check_interval_formula, check_oblivious_roabp


class ExperimentError(ValueError):
    pass


# offset separating the retry stream from first draws
_RETRY = 1 << 32


def _full_rank_with_retry(make, phi, target: int, seed: int) -> dict:
    """Rank of ``make(seed)`` under ``phi``; one reseeded retry when short."""
    r = rank_of(make(seed), phi)
    rec = {"rank": r, "retried": False}
    if r != target:
        rec["retried"] = True
        rec["first_rank"] = r
        rec["rank"] = rank_of(make(derive_seed(seed, _RETRY)), phi)
    rec["ok"] = rec["rank"] == target
    return rec


def _pry_trial(params: dict, seed: int) -> dict:
    n, r, p = params["n"], params["r"], params["prime"]
    bs = BlockStructure(n, r, even_blocks=bool(params["even_blocks"]))
    phi = sample_db(bs, seed)
    target = 2 ** (n // 2)

    def make(s):
        rng = SplitMix64(s)
        W = {}
        for block in bs.blocks:
            W.update(random_w(block, rng, p))
        return gen_pry(bs, W, p)

    draws = [_full_rank_with_retry(make, phi, target, derive_seed(seed, j + 1)) for j in range(params["w_draws"])]
    return {"Y": sorted(phi.Y), "draws": draws, "ok": all(d["ok"] for d in draws)}


def _ry_trial(params: dict, seed: int) -> dict:
    m, p = params["m"], params["prime"]
    varlist = list(range(m))
    target = 2 ** (m // 2)

    def make(s):
        return gen_ry(varlist, random_w(varlist, SplitMix64(s), p), m, p)

    parts = [_full_rank_with_retry(make, phi, target, seed) | {"Y": sorted(phi.Y)}
             for phi in all_equipartitions(varlist, m)]
    return {"m": m, "partitions": parts, "count": len(parts), "ok": all(x["ok"] for x in parts)}


def _dmpy_trial(params: dict, seed: int) -> dict:
    n, p, k = params["n"], params["prime"], params["colorings"]
    target = 2 ** (n // 2)
    f = gen_dmpy(n, random_lambda(n, seed, p), p)
    g = gen_dmpy_smabp(n, random_tags(n, derive_seed(seed, 1), p), p).expand()
    rng = SplitMix64(derive_seed(seed, 2))
    recs = []
    for P in enum_arc_pairings(n):
        for _ in range(k):
            phi = partition_from_pairing(P, rng.below(1 << len(P.pairs)))
            recs.append({"pairs": [list(pr) for pr in P.pairs], "Y": sorted(phi.Y),
                         "rank": rank_of(f, phi), "smabp_rank": rank_of(g, phi)})
    ok = all(x["rank"] == target and x["smabp_rank"] == target for x in recs)
    return {"n": n, "pairings": len(enum_arc_pairings(n)), "checks": recs, "ok": ok}


def _rof_trial(params: dict, seed: int) -> dict:
    n, r, p = params["n"], params["r"], params["prime"]
    F = random_rof(n, seed, p)
    phi = sample_db(BlockStructure(n, r), derive_seed(seed, 1))
    rk = rank_of(F.expand(), phi)
    d = log_deficit(n, rk)
    gap = n / 2 - math.log2(rk) if rk else None
    return {"rank": rk, "log2_rank": round(math.log2(rk), 6) if rk else None, "deficit": d,
            "deficit_bin": None if gap is None else math.floor(gap + 1e-9), "ok": rk <= 2 ** (n // 2)}


def _convert_trial(params: dict, seed: int) -> dict:
    p = params["prime"]
    rng = SplitMix64(seed)
    n = rng.randint(2, params["n_max"])
    size = rng.randint(3, params["size_max"])
    P = random_strict_interval_abp(n, size, derive_seed(seed, 1), p)
    R = strict_interval_to_roabp(P)
    S = P.size
    rec = {"n": n, "S": S, "out_size": R.size, "out_width": R.width, "bound": 2 * n * S,
           "roabp": check_oblivious_roabp(R).verdict, "equal": R.expand() == P.expand()}
    rec["ok"] = rec["roabp"] and rec["equal"] and R.size <= 2 * n * S
    return rec


def _pit_trial(params: dict, seed: int, index: int) -> dict:
    p = params["prime"]
    rng = SplitMix64(seed)
    n = rng.randint(2, params["n_max"])
    n_roabp, n_zero = params["roabps"], params["forced_zero"]
    if index < n_roabp:
        kind = "roabp"
        P = random_roabp(n, rng.randint(1, params["width_max"]), derive_seed(seed, 1), p)
        if index < n_zero:
            kind = "forced-zero"
            P = sum_roabps(P, P.scale(-1))
        res = roabp_pit(P)
    else:
        kind = "strict-interval"
        P = random_strict_interval_abp(n, rng.randint(3, params["size_max"]), derive_seed(seed, 1), p)
        res = strict_interval_pit(P)
    truth = P.expand().is_zero()
    rec = {"kind": kind, "n": n, "size": P.size, "verdict": res.verdict, "expected": "zero" if truth else "nonzero",
           "witness_mask": res.witness_mask, "witness_ok": verify_witness(P, res)}
    rec["ok"] = (res.zero == truth) and rec["witness_ok"] and (not (kind == "forced-zero") or res.zero)
    return rec


def _depthred_trial(params: dict, seed: int) -> dict:
    p = params["prime"]
    rng = SplitMix64(seed)
    n = rng.randint(1, params["n_max"])
    size = rng.randint(1, params["size_max"])
    F = random_interval_formula(n, size, derive_seed(seed, 1), p)
    G = depth_reduce_interval(F)
    s = F.size
    rec = {"n": n, "size_in": s, "depth_in": F.depth, "size_out": G.size, "depth_out": G.depth,
           "depth_bound": round(depth_bound(s), 6),
           "size_exponent": round(math.log(G.size) / math.log(s), 6) if s > 1 and G.size > 0 else None,
           "interval": check_interval_formula(G).verdict, "equal": G.expand() == F.expand()}
    rec["ok"] = rec["interval"] and rec["equal"] and G.depth <= depth_bound(s)
    return rec


def _summ_ok(trials: list[dict]) -> dict:
    return {"trials": len(trials), "failures": sum(1 for t in trials if not t["ok"])}


def _summ_rank_retry(trials: list[dict]) -> dict:
    out = _summ_ok(trials)
    draws = [d for t in trials for d in t.get("draws", t.get("partitions", []))]
    out["retries"] = sum(1 for d in draws if d["retried"])
    return out


def _summ_rof(trials: list[dict]) -> dict:
    out = _summ_ok(trials)
    out["max_rank"] = max(t["rank"] for t in trials) if trials else 0
    # bins: floor(n/2 - log2 rank); "zero" collects identically zero draws
    hist = Counter("zero" if t["deficit_bin"] is None else str(t["deficit_bin"]) for t in trials)
    out["deficit_histogram"] = dict(sorted(hist.items(), key=lambda kv: (kv[0] == "zero", len(kv[0]), kv[0])))
    log_ranks = [t["log2_rank"] for t in trials if t["log2_rank"] is not None]
    out["mean_log2_rank"] = round(sum(log_ranks) / len(log_ranks), 6) if log_ranks else None
    return out


def _summ_convert(trials: list[dict]) -> dict:
    out = _summ_ok(trials)
    out["max_ratio_to_bound"] = max((round(t["out_size"] / t["bound"], 6) for t in trials), default=None)
    return out


def _summ_pit(trials: list[dict]) -> dict:
    out = _summ_ok(trials)
    out["disagreements"] = sum(1 for t in trials if t["verdict"] != t["expected"])
    out["by_kind"] = dict(sorted(Counter(t["kind"] for t in trials).items()))
    out["zero_verdicts"] = sum(1 for t in trials if t["verdict"] == "zero")
    return out


def _summ_depthred(trials: list[dict]) -> dict:
    out = _summ_ok(trials)
    exps = [t["size_exponent"] for t in trials if t["size_exponent"] is not None]
    out["max_size_exponent"] = max(exps, default=None)
    out["max_depth_ratio"] = max((round(t["depth_out"] / t["depth_bound"], 6) for t in trials), default=None)
    return out


class Suite:
    def __init__(self, defaults: dict, count: Callable[[dict], int], trial, summary, indexed: bool = False):
        self.defaults = defaults
        self.count = count
        self.trial = trial
        self.summary = summary
        self.indexed = indexed


SUITES: dict[str, Suite] = {
    "pry-full-rank": Suite({"n": 8, "r": 4, "trials": 20, "w_draws": 3, "even_blocks": 1}, lambda q: q["trials"], _pry_trial,
                           _summ_rank_retry),
    "ry-all-partitions": Suite({"m": 4}, lambda q: 1, _ry_trial, _summ_rank_retry),
    "dmpy-full-rank": Suite({"n": 6, "colorings": 5}, lambda q: 1, _dmpy_trial, _summ_ok),
    "rof-deficit-mc": Suite({"n": 16, "r": 4, "trials": 100}, lambda q: q["trials"], _rof_trial, _summ_rof),
    "convert-corpus": Suite({"count": 100, "n_max": 10, "size_max": 60}, lambda q: q["count"], _convert_trial,
                            _summ_convert),
    "pit-corpus": Suite({"roabps": 200, "strict_interval": 100, "forced_zero": 50, "n_max": 12, "width_max": 4,
                         "size_max": 40},
                        lambda q: q["roabps"] + q["strict_interval"], _pit_trial, _summ_pit, indexed=True),
    "depthred-corpus": Suite({"count": 100, "n_max": 12, "size_max": 100}, lambda q: q["count"], _depthred_trial,
                             _summ_depthred),
}


def _coerce(defaults: dict, params: dict) -> dict:
    out = dict(defaults)
    for k, v in (params or {}).items():
        if k not in defaults:
            raise ExperimentError(f"unknown parameter {k!r}; expected one of {sorted(defaults)}")
        try:
            out[k] = int(v)
        except (TypeError, ValueError):
            raise ExperimentError(f"parameter {k!r} must be an integer, got {v!r}") from None
    return out


def run_experiment(name: str, params: dict | None = None, seed: int = 0, prime: int = DEFAULT_PRIME,
                   threads: int = 1) -> dict:
    if name not in SUITES:
        raise ExperimentError(f"unknown experiment {name!r}; choose from {sorted(SUITES)}")
    suite = SUITES[name]
    q = _coerce(suite.defaults, params)
    q["prime"] = prime
    if name == "pit-corpus" and q["forced_zero"] > q["roabps"]:
        raise ExperimentError("forced_zero cannot exceed roabps")
    count = suite.count(q)

    def run(i: int) -> dict:
        s = derive_seed(seed, i)
        rec = suite.trial(q, s, i) if suite.indexed else suite.trial(q, s)
        return {"index": i, "seed": s, **rec}

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(run, range(count)))
    else:
        trials = [run(i) for i in range(count)]
    summary = suite.summary(trials)
    params_echo = {k: v for k, v in q.items() if k != "prime"}
    return {
        "header": {"tool": "boundedread", "version": __version__, "experiment": name,
                   "params": params_echo, "seed": seed, "prime": prime},
        "summary": summary,
        "ok": summary["failures"] == 0,
        "trials": trials,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def _flatten(rec: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in rec.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = v
    return out


def report_csv(report: dict) -> str:
    """One row per trial; nested values are flattened or JSON-encoded."""
    rows = [_flatten(t) for t in report["trials"]]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
