"""White-box identity testing for read-once oblivious programs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from .abp import Abp
from .poly import bits, popcount
from .transforms import strict_interval_to_roabp
from .validate import check_oblivious_roabp, check_strict_interval


class PitError(ValueError):
    pass


@dataclass(frozen=True)
class PitResult:
    """``zero`` verdict, or a monomial with nonzero coefficient plus a point.

    The monomial has minimum degree in the support, so the 0/1 indicator
    point of the monomial evaluates to exactly ``witness_coeff``.
    """

    zero: bool
    witness_mask: int | None = None
    witness_coeff: int | None = None
    witness_point: tuple | None = None
    max_basis: int = 0

    @property
    def verdict(self) -> str:
        return "zero" if self.zero else "nonzero"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if not self.zero:
            out["witness_mask"] = self.witness_mask
            out["witness_point"] = list(self.witness_point)
        return out


def _dtype(p: int):
    return np.int64 if p < kernels._C_LIMIT else object


def roabp_pit(P: Abp) -> PitResult:
    """Sweep the layers keeping a basis of monomial coefficient vectors.

    Rows are labelled by monomials; at each layer every kept row spawns a
    "skip" row and, if the layer reads a variable, a "read" row. Candidates are
    ordered by (degree, mask) and reduced to a linearly independent subset,
    so the basis never exceeds the layer width.
    """
    rep = check_oblivious_roabp(P)
    if not rep.verdict:
        raise PitError(f"not a ROABP: {rep.witness}")
    p = P.p
    dt = _dtype(p)
    layer_vars = rep.data["layer_vars"]
    masks = [0]
    vecs = np.ones((1, 1), dtype=dt)
    max_basis = 1
    for k, var in enumerate(layer_vars):
        src, dst = P.layers[k], P.layers[k + 1]
        si = {v: i for i, v in enumerate(src)}
        di = {v: i for i, v in enumerate(dst)}
        M0 = np.zeros((len(src), len(dst)), dtype=dt)
        M1 = np.zeros((len(src), len(dst)), dtype=dt)
        for u in src:
            for e in P.out_edges(u):
                M = M0 if e.var is None else M1
                M[si[u], di[e.dst]] = (M[si[u], di[e.dst]] + e.coeff) % p
        cand_masks = list(masks)
        blocks = [kernels.matmul_mod(vecs, M0, p)]
        if var is not None:
            cand_masks += [m | 1 << var for m in masks]
            blocks.append(kernels.matmul_mod(vecs, M1, p))
        cand = np.vstack(blocks)
        order = sorted(range(len(cand_masks)), key=lambda i: (popcount(cand_masks[i]), cand_masks[i]))
        cand = cand[order]
        cand_masks = [cand_masks[i] for i in order]
        keep = kernels.independent_rows(cand, p)
        if len(keep) > len(dst):
            raise AssertionError(f"basis of size {len(keep)} exceeds layer width {len(dst)}")
        masks = [cand_masks[i] for i in keep]
        vecs = cand[keep] if keep else np.zeros((0, len(dst)), dtype=dt)
        max_basis = max(max_basis, len(keep))
    for m, row in zip(masks, vecs):
        c = int(row[0]) % p
        if c:
            point = tuple(1 if m >> i & 1 else 0 for i in range(P.n))
            return PitResult(False, m, c, point, max_basis)
    return PitResult(True, max_basis=max_basis)


def strict_interval_pit(P: Abp) -> PitResult:
    """Convert to a ROABP (same variables) and run :func:`roabp_pit`."""
    rep = check_strict_interval(P)
    if not rep.verdict:
        raise PitError(f"not a strict-interval ABP: {rep.witness}")
    return roabp_pit(strict_interval_to_roabp(P))


def coefficient_via_evaluation(P: Abp, mask: int, max_bits: int = 20) -> int:
    """Coefficient of a monomial by inclusion-exclusion over its sub-monomials."""
    idx = bits(mask)
    if len(idx) > max_bits:
        raise PitError(f"monomial of degree {len(idx)} exceeds the evaluation cap {max_bits}")
    total = 0
    for r in range(len(idx) + 1):
        sign = -1 if (len(idx) - r) % 2 else 1
        for sub in combinations(idx, r):
            point = [0] * P.n
            for i in sub:
                point[i] = 1
            total += sign * P.eval(point)
    return total % P.p


def verify_witness(P: Abp, res: PitResult) -> bool:
    """Check a nonzero verdict against the program itself."""
    if res.zero:
        return True
    if P.eval(list(res.witness_point)) % P.p != res.witness_coeff:
        return False
    if popcount(res.witness_mask) <= 12:
        return coefficient_via_evaluation(P, res.witness_mask) == res.witness_coeff
    return res.witness_coeff != 0
