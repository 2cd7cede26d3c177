"""Prime-field arithmetic.

Elements used inside polynomials and models are plain ``int`` residues; the
:class:`FieldElem` wrapper exists for callers that want checked arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PRIME = 2**31 - 1
_TRUSTED_PRIMES = frozenset({DEFAULT_PRIME, 2**61 - 1, 1_000_000_007, 998_244_353})


class FieldError(ValueError):
    pass


class ModulusMismatch(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


def is_prime_trial(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    """Validate a modulus: trial division below 2**20, built-in primes trusted."""
    if p in _TRUSTED_PRIMES:
        return p
    if p < 2:
        raise FieldError(f"modulus {p} is not prime")
    if p < 2**20:
        if not is_prime_trial(p):
            raise FieldError(f"modulus {p} is not prime")
        return p
    # larger user-supplied moduli: Miller-Rabin with fixed bases is deterministic below 3.3e24
    if not _miller_rabin(p):
        raise FieldError(f"modulus {p} is not prime")
    return p


def _miller_rabin(n: int) -> bool:
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero("inverse of zero")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other: FieldElem | int) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ModulusMismatch(f"{self.p} != {other.p}")
            return other.value
        return other % self.p

    def __add__(self, other):
        return FieldElem(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.value * inv(self._other(other), self.p), self.p)

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def __int__(self) -> int:
        return self.value


def ff_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if a.p != b.p:
        raise ModulusMismatch(f"{a.p} != {b.p}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
