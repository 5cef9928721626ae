"""Complex and bicomplex polynomials.

Coefficients are stored lowest degree first.  A bicomplex polynomial splits
coefficientwise into two complex polynomials (its projections); evaluating
those on the idempotent components of ``w`` and recombining gives the same
value as evaluating the bicomplex polynomial directly.

Textual grammar understood by :func:`parse_poly` and :func:`parse_bicomplex`::

    quad c=<bicomplex>              w**2 + c
    coeffs <a0> <a1> ... <ad>       sum a_k w**k
    (re,i1,i2,j)                    re + i1*i1 + i2*i2 + j*j, four reals
    e1e2(a,b;c,d)                   (a + b i1) e1 + (c + d i1) e2
    <real>                          a plain real number
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from bcjulia.core import (
    DEFAULT_NULL_TOL, ONE, ZERO, Bicomplex, add, from_idempotent, is_null_cone, mul,
    to_idempotent,
)
from bcjulia.errors import DegreeError, ParseError

__all__ = [
    "ComplexPoly", "BicomplexPoly", "quad",
    "eval_direct", "eval_idempotent", "project", "derivative", "is_degenerate",
    "escape_radius", "parse_bicomplex", "parse_poly",
]


def _trim(coeffs: Sequence, zero) -> tuple:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == zero:
        coeffs.pop()
    return tuple(coeffs)


def _fmt_real(x: float) -> str:
    return f"{x:.12g}"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return _fmt_real(z.real)
    if z.real == 0:
        return f"{_fmt_real(z.imag)}i"
    return f"({_fmt_real(z.real)}{z.imag:+.12g}i)"


@dataclass(frozen=True)
class ComplexPoly:
    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex]):
        c = tuple(complex(a) for a in coeffs)
        if not c:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", _trim(c, 0j))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc

    def derivative(self) -> ComplexPoly:
        if len(self.coeffs) == 1:
            return ComplexPoly([0j])
        return ComplexPoly([k * a for k, a in enumerate(self.coeffs) if k > 0])

    def __mul__(self, other: ComplexPoly) -> ComplexPoly:
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(out)

    def __str__(self) -> str:
        if self.degree < 0:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if k > 0 and a == 1:
                body = mono
            elif k > 0 and a == -1:
                body = "-" + mono
            else:
                body = _fmt_complex(a) + mono
            if terms and not body.startswith("-"):
                body = "+" + body
            terms.append(body)
        return "".join(terms)


@dataclass(frozen=True)
class BicomplexPoly:
    coeffs: tuple[Bicomplex, ...]

    def __init__(self, coeffs: Iterable[Bicomplex | complex | float]):
        c = tuple(Bicomplex.coerce(a) for a in coeffs)
        if not c:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", _trim(c, ZERO))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == ZERO:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Bicomplex:
        return self.coeffs[-1]

    def __call__(self, w: Bicomplex) -> Bicomplex:
        return eval_direct(self, w)

    def __mul__(self, other: BicomplexPoly) -> BicomplexPoly:
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = add(out[i + j], mul(a, b))
        return BicomplexPoly(out)

    def __str__(self) -> str:
        return "coeffs " + " ".join(str(a) for a in self.coeffs)


def quad(c: Bicomplex | complex | float) -> BicomplexPoly:
    """``w**2 + c``."""
    return BicomplexPoly([Bicomplex.coerce(c), ZERO, ONE])


def eval_direct(P: BicomplexPoly, w: Bicomplex) -> Bicomplex:
    """Horner evaluation in bicomplex arithmetic."""
    acc = ZERO
    for a in reversed(P.coeffs):
        acc = add(mul(acc, w), a)
    return acc


def project(P: BicomplexPoly, which: int) -> ComplexPoly:
    """Coefficientwise projection onto the first or second idempotent plane."""
    if which not in (1, 2):
        raise ValueError(f"projection index must be 1 or 2, got {which}")
    return ComplexPoly(to_idempotent(a)[which - 1] for a in P.coeffs)


def eval_idempotent(P: BicomplexPoly, w: Bicomplex) -> Bicomplex:
    w1, w2 = to_idempotent(w)
    return from_idempotent((project(P, 1)(w1), project(P, 2)(w2)))


def derivative(P: BicomplexPoly) -> BicomplexPoly:
    if len(P.coeffs) == 1:
        return BicomplexPoly([ZERO])
    return BicomplexPoly([a * k for k, a in enumerate(P.coeffs) if k > 0])


def is_degenerate(P: BicomplexPoly, tol: float = DEFAULT_NULL_TOL) -> bool:
    """True when the leading coefficient is a zero divisor."""
    return is_null_cone(P.leading, tol)


def escape_radius(p: ComplexPoly) -> float:
    """``max(2, (1 + sum_{k<d} |a_k|) / |a_d|)``.

    Beyond this radius ``|p(z)| > |z|`` and the ratio grows with ``|z|``, so
    an orbit that leaves the disc escapes monotonically to infinity.
    """
    d = p.degree
    if d < 2:
        raise DegreeError(f"escape radius needs degree >= 2, got {d}")
    tail = sum(abs(a) for a in p.coeffs[:-1])
    return max(2.0, (1.0 + tail) / abs(p.leading))


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_REALS4 = re.compile(rf"^\(\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*\)$")
_IDEM = re.compile(
    rf"^e1e2\(\s*({_NUM})\s*,\s*({_NUM})\s*;\s*({_NUM})\s*,\s*({_NUM})\s*\)$")
_REAL = re.compile(rf"^{_NUM}$")


def parse_bicomplex(text: str) -> Bicomplex:
    s = text.strip()
    m = _REALS4.match(s)
    if m:
        return Bicomplex.from_reals(*(float(g) for g in m.groups()))
    m = _IDEM.match(s)
    if m:
        a, b, c, d = (float(g) for g in m.groups())
        return from_idempotent((complex(a, b), complex(c, d)))
    if _REAL.match(s):
        return Bicomplex(float(s))
    raise ParseError(f"cannot parse bicomplex literal {text!r}")


def parse_poly(spec: str | Sequence[str]) -> BicomplexPoly:
    tokens = spec.split() if isinstance(spec, str) else list(spec)
    if not tokens:
        raise ParseError("empty polynomial specification")
    kind, rest = tokens[0], tokens[1:]
    if kind == "quad":
        if len(rest) != 1 or not rest[0].startswith("c="):
            raise ParseError("expected 'quad c=<bicomplex>'")
        return quad(parse_bicomplex(rest[0][2:]))
    if kind == "coeffs":
        if not rest:
            raise ParseError("'coeffs' needs at least one coefficient")
        return BicomplexPoly(parse_bicomplex(t) for t in rest)
    raise ParseError(f"unknown polynomial kind {kind!r} (expected 'quad' or 'coeffs')")
