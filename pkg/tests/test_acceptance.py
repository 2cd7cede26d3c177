"""Acceptance gate: one test per headline criterion.

Each test records a PASS/FAIL line in ``RESULTS``; conftest prints them at
the end of the session. ``python tests/test_acceptance.py`` runs the gate
standalone.
"""

import math
import sys
import time

import pytest

from boundedread.experiments import report_json, run_experiment
from boundedread.formula import Formula, Prod, Sum, Var
from boundedread.partitions import Partition
from boundedread.poly import MultilinearPoly
from boundedread.rank import rank_of
from boundedread.rng import SplitMix64, derive_seed
from boundedread.transforms import depth_bound, depth_reduce_interval
from boundedread.validate import check_interval_formula

P = 2**31 - 1
SEED = 20240601
RESULTS: dict[str, str] = {}


def record(key, ok, detail):
    RESULTS[key] = f"{key:<4}{'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_c1_pry_full_rank():
    def go():
        reps = []
        for n in (4, 8, 12):
            for r in (2, 4):
                even = int((n // r) % 2 == 0)
                reps.append(run_experiment("pry-full-rank", {"n": n, "r": r, "trials": 20, "w_draws": 3,
                                                            "even_blocks": even}, seed=SEED))
        return reps

    reps, dt = timed(go)
    draws = sum(len(t["draws"]) for rep in reps for t in rep["trials"])
    retries = sum(rep["summary"]["retries"] for rep in reps)
    ok = all(rep["ok"] for rep in reps) and dt < 30
    assert record("1", ok, f"pry full rank: {draws} draws, {retries} reseeds, {dt:.1f}s (< 30s)")


def test_c2_ry_every_equipartition():
    reps, dt = timed(lambda: [run_experiment("ry-all-partitions", {"m": m}, seed=SEED) for m in (2, 4, 6, 8)])
    counts = [rep["trials"][0]["count"] for rep in reps]
    assert counts == [math.comb(m, m // 2) for m in (2, 4, 6, 8)]
    ok = all(rep["ok"] for rep in reps) and dt < 60
    assert record("2", ok, f"ry full rank on {sum(counts)} equi-partitions, {dt:.1f}s (< 60s)")


def test_c3_dmpy_every_arc_partition():
    reps, dt = timed(lambda: [run_experiment("dmpy-full-rank", {"n": n, "colorings": 5}, seed=SEED)
                              for n in (4, 6, 8)])
    checks = sum(len(rep["trials"][0]["checks"]) for rep in reps)
    ok = all(rep["ok"] for rep in reps) and dt < 60
    assert record("3", ok, f"dmpy and smABP full rank on {checks} arc partitions, {dt:.1f}s (< 60s)")


def _random_poly(rng, n, support):
    coeffs = {}
    for _ in range(rng.randint(1, 12)):
        m = rng.below(1 << n) & support
        coeffs[m] = rng.below(P)
    return MultilinearPoly(n, coeffs, P)


def _random_partition(rng, n):
    return Partition.from_mask(n, rng.below(1 << n))


def _disjoint_pairs(count, seed):
    for i in range(count):
        rng = SplitMix64(derive_seed(seed, i))
        n = rng.randint(2, 10)
        full = (1 << n) - 1
        sa = rng.below(1 << n)
        yield (_random_poly(rng, n, sa), _random_poly(rng, n, full ^ sa), _random_partition(rng, n))


def test_c4_rank_laws():
    bad = 0
    for i in range(200):
        rng = SplitMix64(derive_seed(SEED, i))
        n = rng.randint(1, 10)
        full = (1 << n) - 1
        f, g = _random_poly(rng, n, full), _random_poly(rng, n, full)
        # products must stay multilinear, so the second factor avoids var(f)
        h = _random_poly(rng, n, rng.below(1 << n) & ~f.support() & full)
        phi = _random_partition(rng, n)
        rf, rg, rh = rank_of(f, phi), rank_of(g, phi), rank_of(h, phi)
        bad += rank_of(f + g, phi) > rf + rg or rank_of(f * h, phi) > rf * rh
    prod_eq = sum(rank_of(f * g, phi) == rank_of(f, phi) * rank_of(g, phi)
                  for f, g, phi in _disjoint_pairs(100, SEED + 1))
    ok = bad == 0 and prod_eq == 100
    assert record("4", ok, f"sub-additive/sub-multiplicative 200/200 violations={bad}; "
                           f"product equality on disjoint pairs {prod_eq}/100")


@pytest.mark.xfail(strict=True, reason="additive equality on disjoint variables is false; see decisions ledger")
def test_c4b_additive_equality_literal():
    hits = sum(rank_of(f + g, phi) == rank_of(f, phi) + rank_of(g, phi)
               for f, g, phi in _disjoint_pairs(100, SEED + 1))
    ok = record("4b", hits == 100, f"sum equality on disjoint pairs {hits}/100 "
                                   f"(expected failure: x0+x1 with x0,x1 in Y has rank 1, not 2)")
    assert ok


def test_c5_rof_rank_cap():
    rep, dt = timed(lambda: run_experiment("rof-deficit-mc", {"n": 16, "trials": 100}, seed=SEED))
    s = rep["summary"]
    ok = rep["ok"] and s["max_rank"] <= 2**8 and sum(s["deficit_histogram"].values()) == 100
    assert record("5", ok, f"rof max rank {s['max_rank']} <= 256, deficit histogram {s['deficit_histogram']}")


def test_c6_conversion():
    rep, dt = timed(lambda: run_experiment("convert-corpus", {"count": 100, "n_max": 10, "size_max": 60}, seed=SEED))
    s = rep["summary"]
    assert all(t["n"] <= 10 and t["S"] <= 60 for t in rep["trials"])
    ok = rep["ok"] and dt < 60
    assert record("6", ok, f"convert 100 programs, failures={s['failures']}, "
                           f"max size/2nS={s['max_ratio_to_bound']}, {dt:.1f}s (< 60s)")


def test_c7_pit_oracle():
    rep = run_experiment("pit-corpus", {"roabps": 200, "strict_interval": 100, "forced_zero": 50, "n_max": 12},
                         seed=SEED)
    s = rep["summary"]
    assert s["by_kind"] == {"forced-zero": 50, "roabp": 150, "strict-interval": 100}
    ok = rep["ok"] and s["disagreements"] == 0
    assert record("7", ok, f"pit on 300 programs, disagreements={s['disagreements']}, "
                           f"zero verdicts={s['zero_verdicts']}, all witnesses verified={s['failures'] == 0}")


def test_c8_depth_reduction():
    rep = run_experiment("depthred-corpus", {"count": 100, "n_max": 12, "size_max": 100}, seed=SEED)
    # h * (q + g) with g = x2*x3*x4: the g:=0 remainder must keep the factor h
    F = Formula(Prod((Var(0), Sum((Var(1), Prod((Var(2), Prod((Var(3), Var(4))))))))), 5, P)
    G = depth_reduce_interval(F)
    fixture = (G.expand() == F.expand() and check_interval_formula(G).verdict
               and G.depth <= depth_bound(F.size))
    s = rep["summary"]
    ok = rep["ok"] and fixture
    assert record("8", ok, f"depth reduce 100 formulas, failures={s['failures']}, "
                           f"max depth/bound={s['max_depth_ratio']}, regression fixture={fixture}")


def test_c9_determinism():
    params = {"pit-corpus": {"roabps": 30, "strict_interval": 20, "forced_zero": 10},
              "pry-full-rank": {"trials": 10}, "depthred-corpus": {"count": 30},
              "rof-deficit-mc": {"trials": 30}, "convert-corpus": {"count": 30},
              "ry-all-partitions": {"m": 6}, "dmpy-full-rank": {"n": 6}}
    same = {}
    for name, q in params.items():
        outs = {report_json(run_experiment(name, q, seed=SEED, threads=t)) for t in (1, 2, 4)}
        outs.add(report_json(run_experiment(name, q, seed=SEED, threads=1)))
        same[name] = len(outs) == 1
    ok = all(same.values())
    assert record("9", ok, f"byte-identical reports across threads 1/2/4 for {sum(same.values())}/{len(same)} suites")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
