"""Dense multilinear polynomials keyed by variable bitmasks."""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .field import DEFAULT_PRIME, ModulusMismatch, check_modulus

MAX_VARS = 24


class PolyError(ValueError):
    pass


class OverlappingSupports(PolyError):
    """Product of two polynomials that share a variable."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class MultilinearPoly:
    """Multilinear polynomial over GF(p) in variables ``x_0 .. x_{n-1}``.

    ``coeffs`` maps a monomial bitmask to its nonzero coefficient. Instances
    are treated as immutable.
    """

    __slots__ = ("n", "p", "_coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, int] | None = None, p: int = DEFAULT_PRIME):
        if n < 0 or n > MAX_VARS:
            raise PolyError(f"n={n} outside [0, {MAX_VARS}]")
        self.n = n
        self.p = p
        full = (1 << n) - 1
        clean: dict[int, int] = {}
        for mask, c in (coeffs or {}).items():
            if mask < 0 or mask & ~full:
                raise PolyError(f"monomial mask {mask} uses a variable outside [0, {n})")
            c %= p
            if c:
                clean[mask] = c
        self._coeffs = clean

    # constructors
    @classmethod
    def zero(cls, n: int, p: int = DEFAULT_PRIME) -> MultilinearPoly:
        return cls(n, {}, p)

    @classmethod
    def const(cls, n: int, c: int, p: int = DEFAULT_PRIME) -> MultilinearPoly:
        return cls(n, {0: c}, p)

    @classmethod
    def var(cls, n: int, i: int, c: int = 1, p: int = DEFAULT_PRIME) -> MultilinearPoly:
        if not 0 <= i < n:
            raise PolyError(f"variable {i} outside [0, {n})")
        return cls(n, {1 << i: c}, p)

    @classmethod
    def _raw(cls, n: int, coeffs: dict[int, int], p: int) -> MultilinearPoly:
        # trusted path: coeffs already reduced and pruned
        obj = cls.__new__(cls)
        obj.n, obj.p, obj._coeffs = n, p, coeffs
        return obj

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def coeff(self, mask: int) -> int:
        return self._coeffs.get(mask, 0)

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def support(self) -> int:
        """Bitmask of variables occurring in some nonzero monomial."""
        s = 0
        for m in self._coeffs:
            s |= m
        return s

    def degree(self) -> int:
        return max((popcount(m) for m in self._coeffs), default=-1)

    def _check(self, other: MultilinearPoly) -> None:
        if self.n != other.n:
            raise PolyError(f"variable count mismatch: {self.n} != {other.n}")
        if self.p != other.p:
            raise ModulusMismatch(f"{self.p} != {other.p}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.n == other.n and self.p == other.p and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.p, frozenset(self._coeffs.items())))

    def __add__(self, other: MultilinearPoly) -> MultilinearPoly:
        self._check(other)
        p = self.p
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultilinearPoly._raw(self.n, out, p)

    def __neg__(self) -> MultilinearPoly:
        p = self.p
        return MultilinearPoly._raw(self.n, {m: p - c for m, c in self._coeffs.items()}, p)

    def __sub__(self, other: MultilinearPoly) -> MultilinearPoly:
        return self + (-other)

    def scale(self, c: int) -> MultilinearPoly:
        p = self.p
        c %= p
        if c == 0:
            return MultilinearPoly._raw(self.n, {}, p)
        return MultilinearPoly._raw(self.n, {m: v * c % p for m, v in self._coeffs.items()}, p)

    def __mul__(self, other: MultilinearPoly) -> MultilinearPoly:
        self._check(other)
        shared = self.support() & other.support()
        if shared:
            raise OverlappingSupports(f"operands share variables {bits(shared)}")
        p = self.p
        out: dict[int, int] = {}
        # disjoint supports: every product mask is distinct
        for m1, c1 in self._coeffs.items():
            for m2, c2 in other._coeffs.items():
                out[m1 | m2] = c1 * c2 % p
        return MultilinearPoly._raw(self.n, out, p)

    def mul_var(self, i: int, c: int = 1) -> MultilinearPoly:
        """Multiply by ``c * x_i``; raises if ``x_i`` already occurs."""
        bit = 1 << i
        p = self.p
        out = {}
        for m, v in self._coeffs.items():
            if m & bit:
                raise OverlappingSupports(f"variable {i} already present")
            out[m | bit] = v * c % p
        return MultilinearPoly._raw(self.n, {m: v for m, v in out.items() if v}, p)

    def __call__(self, point: Sequence[int]) -> int:
        return self.eval(point)

    def eval(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise PolyError(f"point has length {len(point)}, expected {self.n}")
        p = self.p
        pt = [int(v) % p for v in point]
        total = 0
        for m, c in self._coeffs.items():
            term = c
            i = 0
            while m:
                if m & 1:
                    term = term * pt[i] % p
                m >>= 1
                i += 1
            total += term
        return total % p

    def substitute(self, values: Mapping[int, int], new_n: int | None = None) -> MultilinearPoly:
        """Fix the variables in ``values`` to field constants."""
        p = self.p
        fixed = mask_of(values)
        out: dict[int, int] = {}
        for m, c in self._coeffs.items():
            for i in bits(m & fixed):
                c = c * values[i] % p
            key = m & ~fixed
            out[key] = (out.get(key, 0) + c) % p
        n = self.n if new_n is None else new_n
        return MultilinearPoly(n, out, p)

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"MultilinearPoly(n={self.n}, 0)"
        terms = []
        for m in sorted(self._coeffs):
            mono = "*".join(f"x{i}" for i in bits(m)) or "1"
            terms.append(f"{self._coeffs[m]}*{mono}")
        return f"MultilinearPoly(n={self.n}, {' + '.join(terms)})"

    # JSON
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "terms": [{"mask": m, "coeff": self._coeffs[m]} for m in sorted(self._coeffs)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultilinearPoly:
        try:
            n, p, terms = int(data["n"]), int(data["p"]), data["terms"]
        except (KeyError, TypeError) as exc:
            raise PolyError(f"malformed polynomial JSON: {exc}") from exc
        check_modulus(p)
        coeffs: dict[int, int] = {}
        last = -1
        for t in terms:
            m = int(t["mask"])
            if m <= last:
                raise PolyError("term masks must be strictly increasing")
            last = m
            coeffs[m] = int(t["coeff"])
        return cls(n, coeffs, p)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def mlp_add(f: MultilinearPoly, g: MultilinearPoly) -> MultilinearPoly:
    return f + g


def mlp_mul(f: MultilinearPoly, g: MultilinearPoly) -> MultilinearPoly:
    return f * g


def mlp_eval(f: MultilinearPoly, point: Sequence[int]) -> int:
    return f.eval(point)
