import math

import pytest
from hypothesis import assume, given, strategies as st

from bcjulia import core
from bcjulia.core import E1, E2, I1, I2, J, ONE, ZERO, Bicomplex, ConjKind
from bcjulia.errors import NullConeError

from strategies import bicomplex, cclose, close, complexes

# Products of the real basis (1, i1, i2, j), written out independently of the
# z1 + z2 i2 representation: BASIS[a][b] = (sign, index).
BASIS = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (1, 3), (-1, 0), (-1, 1)],
    [(1, 3), (-1, 2), (-1, 1), (1, 0)],
]


def table_mul(a, b):
    out = [0.0] * 4
    for i, x in enumerate(a.to_reals()):
        for k, y in enumerate(b.to_reals()):
            s, idx = BASIS[i][k]
            out[idx] += s * x * y
    return Bicomplex.from_reals(*out)


def test_unit_squares():
    assert I1 * I1 == -ONE
    assert I2 * I2 == -ONE
    assert J * J == ONE
    assert I1 * I2 == J
    assert I1 * J == -I2
    assert I2 * J == -I1


def test_idempotents():
    assert E1 * E1 == E1
    assert E2 * E2 == E2
    assert E1 * E2 == ZERO
    assert E1 + E2 == ONE
    assert core.to_idempotent(E1) == (1, 0)
    assert core.to_idempotent(E2) == (0, 1)


def test_reals_round_trip():
    w = Bicomplex.from_reals(1.5, -2.0, 0.25, 3.0)
    assert w.to_reals() == (1.5, -2.0, 0.25, 3.0)
    assert str(w) == "(1.5,-2.0,0.25,3.0)"


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        Bicomplex(complex(math.inf, 0), 0)
    with pytest.raises(ValueError):
        Bicomplex(0, complex(0, math.nan))


def test_scalar_mixing():
    w = Bicomplex.from_reals(1, 2, 3, 4)
    assert w + 1 == Bicomplex.from_reals(2, 2, 3, 4)
    assert 1 - w == Bicomplex.from_reals(0, -2, -3, -4)
    assert w * 2 == 2 * w == Bicomplex.from_reals(2, 4, 6, 8)
    assert w * 1j == I1 * w


@given(bicomplex, bicomplex)
def test_mul_matches_basis_table(a, b):
    assert close(a * b, table_mul(a, b), 1e-12, core.norm(a) * core.norm(b))


@given(bicomplex, bicomplex, bicomplex)
def test_ring_laws(a, b, c):
    na, nb, nc = core.norm(a), core.norm(b), core.norm(c)
    assert a * b == b * a
    assert a + b == b + a
    assert close((a * b) * c, a * (b * c), 1e-12, na * nb * nc)
    assert close(a * (b + c), a * b + a * c, 1e-12, na * (nb + nc))
    assert a * ONE == a
    assert a + ZERO == a


@given(bicomplex)
def test_inverse(w):
    assume(not core.is_null_cone(w, 1e-6))
    assert close(w * core.inverse(w), ONE, 1e-10)


@given(complexes)
def test_null_cone_has_no_inverse(z):
    for w in (E1 * z, E2 * z):
        if z != 0:
            assert core.is_null_cone(w)
        with pytest.raises(NullConeError):
            core.inverse(w)
        with pytest.raises(ZeroDivisionError):
            ONE / w


def test_power():
    w = Bicomplex.from_reals(0.5, -1, 0.25, 2)
    assert close(w ** 3, w * w * w, 1e-14, core.norm(w) ** 3)
    assert w ** 0 == ONE
    assert close(w ** -2, core.inverse(w * w), 1e-12, 10.0)


@given(bicomplex)
def test_klein_group(w):
    for a in ConjKind:
        for b in ConjKind:
            assert core.conj(a, core.conj(b, w)) == core.conj(a.compose(b), w)
    assert core.conj(ConjKind.IDENTITY, w) == w
    for k in ConjKind:
        assert core.conj(k, core.conj(k, w)) == w


@given(bicomplex, bicomplex)
def test_conjugations_are_ring_automorphisms(a, b):
    scale = core.norm(a) * core.norm(b)
    for k in ConjKind:
        assert close(core.conj(k, a * b), core.conj(k, a) * core.conj(k, b), 1e-12, scale)
        assert close(core.conj(k, a + b), core.conj(k, a) + core.conj(k, b), 1e-12, scale + 1)


@given(bicomplex)
def test_moduli_are_products_with_conjugates(w):
    n2 = core.norm(w) ** 2
    p = w * core.conj(ConjKind.I2_FLIP, w)
    m1 = core.mod_sq_i1(w)
    assert cclose(p.z1, m1, 1e-12 * max(1, n2)) and abs(p.z2) <= 1e-12 * max(1, n2)

    p = w * core.conj(ConjKind.BAR, w)
    re, im2 = core.mod_sq_i2(w)
    assert close(p, Bicomplex(re, im2), 1e-12, n2)

    p = w * core.conj(ConjKind.BOTH, w)
    d = core.mod_sq_j(w)
    assert close(p, Bicomplex.from_reals(d.x, 0, 0, d.y), 1e-12, n2)
    assert d.x == pytest.approx(n2, rel=1e-12, abs=1e-300)


@given(bicomplex)
def test_mod_sq_i1_is_product_of_idempotent_components(w):
    w1, w2 = core.to_idempotent(w)
    assert cclose(core.mod_sq_i1(w), w1 * w2, 1e-12 * max(1, core.norm(w) ** 2))


@given(bicomplex)
def test_idempotent_round_trip(w):
    assert close(core.from_idempotent(core.to_idempotent(w)), w, 1e-15, core.norm(w))


@given(bicomplex, bicomplex)
def test_idempotent_homomorphism(a, b):
    a1, a2 = core.to_idempotent(a)
    b1, b2 = core.to_idempotent(b)
    na, nb = core.norm(a), core.norm(b)
    assert close(core.from_idempotent((a1 + b1, a2 + b2)), a + b, 1e-12, na + nb)
    assert close(core.from_idempotent((a1 * b1, a2 * b2)), a * b, 1e-12, na * nb)
    if not core.is_null_cone(b, 1e-6):
        q = a / b
        assert close(core.from_idempotent((a1 / b1, a2 / b2)), q, 1e-10, core.norm(q))


@given(bicomplex)
def test_norm_from_idempotent_components(w):
    w1, w2 = core.to_idempotent(w)
    assert core.norm(w) == pytest.approx(math.sqrt((abs(w1) ** 2 + abs(w2) ** 2) / 2), rel=1e-12, abs=1e-300)
    assert abs(w) == core.norm(w)


@given(bicomplex, bicomplex, complexes)
def test_norm_properties(a, b, s):
    na, nb = core.norm(a), core.norm(b)
    assert na >= 0
    assert (na == 0) == (a == ZERO)
    assert core.norm(a * s) == pytest.approx(abs(s) * na, rel=1e-12, abs=1e-300)
    assert core.norm(a + b) <= (na + nb) * (1 + 1e-12)
    assert core.norm(a * b) <= math.sqrt(2) * na * nb * (1 + 1e-12)


def test_norm_product_bound_is_sharp():
    assert core.norm(E1 * E1) == pytest.approx(math.sqrt(2) * core.norm(E1) ** 2, abs=1e-12)


def test_null_cone_tolerance():
    near = E1 + E2 * 1e-14
    assert core.is_null_cone(near)
    assert not core.is_null_cone(near, tol=0.0)
    with pytest.raises(ValueError):
        core.is_null_cone(ONE, tol=-1)


@given(st.integers(0, 3), st.integers(0, 3))
def test_compose_is_xor(a, b):
    assert ConjKind(a).compose(ConjKind(b)) == ConjKind(a ^ b)
