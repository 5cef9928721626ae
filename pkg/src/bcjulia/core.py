"""Bicomplex numbers.

A bicomplex number is ``z1 + z2*i2`` where ``z1`` and ``z2`` are ordinary
complex numbers in the imaginary unit ``i1`` (Python's ``1j``).  The units
satisfy ``i1**2 == i2**2 == -1``, ``j = i1*i2`` and ``j**2 == 1``; the algebra
is commutative but has zero divisors (the null-cone).

Every value also has an idempotent form ``w1*e1 + w2*e2`` with
``e1 = (1+j)/2``, ``e2 = (1-j)/2``, ``w1 = z1 - z2*i1`` and
``w2 = z1 + z2*i1``.  In that form ring operations act componentwise, which
is what the dynamics code relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Union

from bcjulia.errors import NullConeError

__all__ = [
    "Bicomplex", "Duplex", "ConjKind", "IdempotentPair",
    "ZERO", "ONE", "I1", "I2", "J", "E1", "E2",
    "add", "sub", "mul", "div", "conj", "mod_sq_i1", "mod_sq_i2", "mod_sq_j",
    "norm", "is_null_cone", "inverse", "to_idempotent", "from_idempotent",
    "DEFAULT_NULL_TOL",
]

DEFAULT_NULL_TOL = 1e-12

Scalar = Union[int, float, complex]


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True, slots=True)
class Bicomplex:
    """The bicomplex number ``z1 + z2*i2``.

    Arithmetic operators are defined between bicomplex values and between a
    bicomplex value and a Python scalar (scalars embed as ``z1``).
    """

    z1: complex = 0j
    z2: complex = 0j

    def __post_init__(self):
        z1 = complex(self.z1)
        z2 = complex(self.z2)
        if not (_finite(z1) and _finite(z2)):
            raise ValueError(f"non-finite bicomplex component: ({z1}, {z2})")
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)

    @classmethod
    def from_reals(cls, w0: float, w1: float, w2: float, w3: float) -> Bicomplex:
        """Build ``w0 + w1*i1 + w2*i2 + w3*j``."""
        return cls(complex(w0, w1), complex(w2, w3))

    def to_reals(self) -> tuple[float, float, float, float]:
        return (self.z1.real, self.z1.imag, self.z2.real, self.z2.imag)

    @classmethod
    def coerce(cls, value: Bicomplex | Scalar) -> Bicomplex:
        if isinstance(value, Bicomplex):
            return value
        if isinstance(value, (int, float, complex)):
            return cls(complex(value), 0j)
        raise TypeError(f"cannot interpret {value!r} as a bicomplex number")

    def __add__(self, other):
        if not isinstance(other, (Bicomplex, int, float, complex)):
            return NotImplemented
        return add(self, Bicomplex.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Bicomplex, int, float, complex)):
            return NotImplemented
        return sub(self, Bicomplex.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (Bicomplex, int, float, complex)):
            return NotImplemented
        return sub(Bicomplex.coerce(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            s = complex(other)
            return Bicomplex(self.z1 * s, self.z2 * s)
        if not isinstance(other, Bicomplex):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            s = complex(other)
            if s == 0:
                raise ZeroDivisionError("bicomplex division by zero scalar")
            return Bicomplex(self.z1 / s, self.z2 / s)
        if not isinstance(other, Bicomplex):
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other):
        if not isinstance(other, (int, float, complex)):
            return NotImplemented
        return div(Bicomplex.coerce(other), self)

    def __neg__(self):
        return Bicomplex(-self.z1, -self.z2)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base)
            n >>= 1
        return result

    def __abs__(self) -> float:
        return norm(self)

    def __str__(self) -> str:
        w0, w1, w2, w3 = self.to_reals()
        return f"({w0!r},{w1!r},{w2!r},{w3!r})"


@dataclass(frozen=True, slots=True)
class Duplex:
    """Hyperbolic (duplex) number ``x + y*j``."""

    x: float
    y: float


class ConjKind(IntEnum):
    """The identity and the three bicomplex conjugations.

    Composition is the Klein four-group; with this numbering it is the
    bitwise xor of the kinds.
    """

    IDENTITY = 0
    BAR = 1        # (conj z1, conj z2)
    I2_FLIP = 2    # (z1, -z2)
    BOTH = 3       # (conj z1, -conj z2)

    def compose(self, other: ConjKind) -> ConjKind:
        return ConjKind(int(self) ^ int(other))


class IdempotentPair(NamedTuple):
    """Coordinates ``(w1, w2)`` of ``w1*e1 + w2*e2``."""

    w1: complex
    w2: complex


ZERO = Bicomplex(0j, 0j)
ONE = Bicomplex(1 + 0j, 0j)
I1 = Bicomplex(1j, 0j)
I2 = Bicomplex(0j, 1 + 0j)
J = Bicomplex(0j, 1j)
E1 = Bicomplex(0.5 + 0j, 0.5j)
E2 = Bicomplex(0.5 + 0j, -0.5j)


def add(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    return Bicomplex(a.z1 + b.z1, a.z2 + b.z2)


def sub(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    return Bicomplex(a.z1 - b.z1, a.z2 - b.z2)


def mul(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    """``(z1 + z2 i2)(s1 + s2 i2) = (z1 s1 - z2 s2) + (z1 s2 + z2 s1) i2``."""
    return Bicomplex(a.z1 * b.z1 - a.z2 * b.z2, a.z1 * b.z2 + a.z2 * b.z1)


def conj(kind: ConjKind | int, w: Bicomplex) -> Bicomplex:
    kind = ConjKind(kind)
    if kind is ConjKind.IDENTITY:
        return w
    if kind is ConjKind.BAR:
        return Bicomplex(w.z1.conjugate(), w.z2.conjugate())
    if kind is ConjKind.I2_FLIP:
        return Bicomplex(w.z1, -w.z2)
    return Bicomplex(w.z1.conjugate(), -w.z2.conjugate())


def mod_sq_i1(w: Bicomplex) -> complex:
    """``w * conj(2, w) = z1**2 + z2**2``, a value in C(i1)."""
    return w.z1 * w.z1 + w.z2 * w.z2


def mod_sq_i2(w: Bicomplex) -> tuple[float, float]:
    """``w * conj(1, w)`` as ``(real part, i2 part)``."""
    z1, z2 = w.z1, w.z2
    re = (z1.real * z1.real + z1.imag * z1.imag) - (z2.real * z2.real + z2.imag * z2.imag)
    return re, 2.0 * (z1 * z2.conjugate()).real


def mod_sq_j(w: Bicomplex) -> Duplex:
    """``w * conj(3, w)`` as a duplex number."""
    z1, z2 = w.z1, w.z2
    x = (z1.real * z1.real + z1.imag * z1.imag) + (z2.real * z2.real + z2.imag * z2.imag)
    return Duplex(x, -2.0 * (z1 * z2.conjugate()).imag)


def norm(w: Bicomplex) -> float:
    """Euclidean norm in R^4."""
    z1, z2 = w.z1, w.z2
    return math.sqrt(z1.real * z1.real + z1.imag * z1.imag
                     + z2.real * z2.real + z2.imag * z2.imag)


def to_idempotent(w: Bicomplex) -> IdempotentPair:
    t = complex(-w.z2.imag, w.z2.real)  # z2 * i1, exact
    return IdempotentPair(w.z1 - t, w.z1 + t)


def from_idempotent(p: IdempotentPair | tuple[complex, complex]) -> Bicomplex:
    w1, w2 = complex(p[0]), complex(p[1])
    # z2 = (w2 - w1) / (2 i1) = i1 (w1 - w2) / 2
    d = (w1 - w2) * 0.5
    return Bicomplex((w1 + w2) * 0.5, complex(-d.imag, d.real))


def is_null_cone(w: Bicomplex, tol: float = DEFAULT_NULL_TOL) -> bool:
    """Zero-divisor test: one idempotent component vanishes, relative to
    ``max(1, norm(w))``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    w1, w2 = to_idempotent(w)
    return min(abs(w1), abs(w2)) <= tol * max(1.0, norm(w))


def inverse(w: Bicomplex, tol: float = DEFAULT_NULL_TOL) -> Bicomplex:
    """``conj(2, w) / mod_sq_i1(w)``.

    Raises :class:`NullConeError` when ``w`` is a zero divisor.
    """
    if is_null_cone(w, tol):
        raise NullConeError(f"{w} lies in the null-cone and has no inverse")
    m = mod_sq_i1(w)
    return Bicomplex(w.z1 / m, -w.z2 / m)


def div(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    return mul(a, inverse(b))
