"""Exact arithmetic in Z[zeta] for a primitive fifth root of unity zeta.

Elements are stored in the canonical quadruple form ``⌊n,o,p,q⌋`` meaning
``n*zeta + o*zeta^2 + p*zeta^3 + q*zeta^4``.  The constant term is always
eliminated with ``1 = -(zeta + zeta^2 + zeta^3 + zeta^4)``, so two values are
equal exactly when their quadruples are equal.

Coefficients are Python ints, which never wrap around.
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["CycloInt", "canon", "add", "mul", "conj", "zeta_pow", "ZERO", "ONE"]


def _canon5(c: Sequence[int]) -> tuple[int, int, int, int]:
    c0 = c[0]
    return (c[1] - c0, c[2] - c0, c[3] - c0, c[4] - c0)


def _mul4(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int, int]:
    # a, b are coefficient vectors over zeta^1..zeta^4
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b
    c0 = a1 * b4 + a2 * b3 + a3 * b2 + a4 * b1
    c1 = a2 * b4 + a3 * b3 + a4 * b2
    c2 = a1 * b1 + a3 * b4 + a4 * b3
    c3 = a1 * b2 + a2 * b1 + a4 * b4
    c4 = a1 * b3 + a2 * b2 + a3 * b1
    return (c1 - c0, c2 - c0, c3 - c0, c4 - c0)


@dataclass(frozen=True, slots=True)
class CycloInt:
    """Element of Z[zeta_5] as the canonical quadruple ``⌊n,o,p,q⌋``."""

    n: int = 0
    o: int = 0
    p: int = 0
    q: int = 0

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "CycloInt":
        """Build from the coefficients of 1, zeta, ..., zeta^4."""
        if len(coeffs) != 5:
            raise ValueError(f"expected 5 coefficients, got {len(coeffs)}")
        return cls(*_canon5([int(c) for c in coeffs]))

    @classmethod
    def from_json(cls, data: str | Sequence[int]) -> "CycloInt":
        if isinstance(data, str):
            data = json.loads(data)
        if len(data) != 4 or not all(isinstance(v, int) for v in data):
            raise ValueError(f"expected a list of 4 integers, got {data!r}")
        return cls(*data)

    @classmethod
    def parse(cls, text: str) -> "CycloInt":
        """Parse ``⌊n,o,p,q⌋`` or ``[n,o,p,q]``."""
        body = text.strip().strip("⌊⌋[]() ")
        parts = [s.strip() for s in body.split(",")]
        if len(parts) != 4:
            raise ValueError(f"not a quadruple: {text!r}")
        return cls(*(int(s) for s in parts))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.o, self.p, self.q)

    def to_json(self) -> list[int]:
        return [self.n, self.o, self.p, self.q]

    def __str__(self) -> str:
        return "⌊{},{},{},{}⌋".format(*self.as_tuple())

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other: "CycloInt") -> "CycloInt":
        if not isinstance(other, CycloInt):
            return NotImplemented
        return CycloInt(self.n + other.n, self.o + other.o,
                        self.p + other.p, self.q + other.q)

    def __neg__(self) -> "CycloInt":
        return CycloInt(-self.n, -self.o, -self.p, -self.q)

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "CycloInt":
        if isinstance(other, int):
            return CycloInt(self.n * other, self.o * other,
                            self.p * other, self.q * other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        return CycloInt(*_mul4(self.as_tuple(), other.as_tuple()))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycloInt":
        if e < 0:
            raise ValueError("negative powers are only defined for units; use zeta_pow")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycloInt":
        """Complex conjugation: zeta <-> zeta^4, zeta^2 <-> zeta^3."""
        return CycloInt(self.q, self.p, self.o, self.n)

    def is_zero(self) -> bool:
        return not (self.n or self.o or self.p or self.q)

    def to_complex(self, k: int = 1) -> complex:
        """Numerical value under the embedding zeta -> exp(2*pi*i*k/5)."""
        w = cmath.exp(2j * cmath.pi * k / 5)
        return sum(c * w ** (j + 1) for j, c in enumerate(self.as_tuple()))


ZERO = CycloInt(0, 0, 0, 0)
ONE = CycloInt(-1, -1, -1, -1)


def canon(c0: int, c1: int, c2: int, c3: int, c4: int) -> CycloInt:
    """Canonical quadruple of ``c0 + c1*zeta + ... + c4*zeta^4``."""
    return CycloInt(c1 - c0, c2 - c0, c3 - c0, c4 - c0)


def add(a: CycloInt, b: CycloInt) -> CycloInt:
    return a + b


def mul(a: CycloInt, b: CycloInt) -> CycloInt:
    return a * b


def conj(z: CycloInt) -> CycloInt:
    return z.conj()


def zeta_pow(base_sign: int, k: int, e: int) -> CycloInt:
    """``(base_sign * zeta^k)^e``; negative ``e`` is fine since zeta is a unit."""
    if base_sign not in (1, -1):
        raise ValueError("base_sign must be +1 or -1")
    coeffs = [0] * 5
    coeffs[(k * e) % 5] = base_sign ** (e % 2)
    return CycloInt.from_coeffs(coeffs)


def total(values: Iterable[CycloInt]) -> CycloInt:
    acc = [0, 0, 0, 0]
    for v in values:
        acc[0] += v.n
        acc[1] += v.o
        acc[2] += v.p
        acc[3] += v.q
    return CycloInt(*acc)
