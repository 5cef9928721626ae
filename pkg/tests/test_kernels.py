import numpy as np
import pytest

from bcjulia import kernels
from bcjulia.dynamics import IterParams, component_orbits
from bcjulia.poly import ComplexPoly, quad, parse_bicomplex
from bcjulia.render import RenderOptions, SliceSpec, raymarch_image

needs_ext = pytest.mark.skipif("cython" not in kernels.available_backends(),
                               reason="compiled kernels not built")


def run_escape(mod, p, z, radius, max_iter):
    cre = np.ascontiguousarray([c.real for c in p.coeffs])
    cim = np.ascontiguousarray([c.imag for c in p.coeffs])
    n = z.size
    esc = np.zeros(n, dtype=np.uint8)
    it = np.zeros(n, dtype=np.int32)
    de = np.zeros(n)
    mod.escape_time(cre, cim, np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag),
                    radius, max_iter, esc, it, de)
    return esc, it, de


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")
    assert "python" in kernels.available_backends()
    assert kernels.BACKEND in kernels.available_backends()


@needs_ext
@pytest.mark.parametrize("coeffs", [
    [0.27, 0, 1],
    [-0.123 + 0.745j, 0, 1],
    [-1.754878, 0, 1],
    [0.3 - 0.1j, 0.2j, -0.5, 1, 0.1],
])
def test_escape_time_backends_agree(coeffs):
    rng = np.random.default_rng(42)
    z = rng.uniform(-2, 2, 4000) + 1j * rng.uniform(-2, 2, 4000)
    p = ComplexPoly(coeffs)
    c = run_escape(kernels.load_backend("cython"), p, z, 3.0, 300)
    py = run_escape(kernels.load_backend("python"), p, z, 3.0, 300)
    assert np.array_equal(c[0], py[0])
    assert np.array_equal(c[1], py[1])
    # identical operation order; only libm log may differ in the last ulp
    np.testing.assert_allclose(c[2], py[2], rtol=1e-15, atol=0)


def test_escape_time_edge_cases(backend):
    mod = kernels.load_backend(backend)
    p = ComplexPoly([0, 0, 1])
    esc, it, de = run_escape(mod, p, np.array([0j, 5 + 0j, 1.5 + 0j, 0.5j]), 2.0, 50)
    assert list(esc) == [0, 1, 1, 0]
    assert list(it) == [50, 0, 1, 50]
    assert np.isinf(de[0]) and np.isinf(de[3])
    assert de[1] == pytest.approx(5 * np.log(5), rel=1e-12)


def test_huge_start_keeps_finite_estimate(backend):
    mod = kernels.load_backend(backend)
    esc, it, de = run_escape(mod, ComplexPoly([0, 0, 1]), np.array([1e60 + 0j]), 2.0, 10)
    assert esc[0] == 1 and it[0] == 0 and np.isfinite(de[0])


@needs_ext
def test_raymarch_backends_agree():
    P = quad(parse_bicomplex("(-1.754878,0,0,0)"))
    spec = SliceSpec.j0((-2.0, 2.0), 24)
    opts = RenderOptions(direction=(0.3, 0.2, 1.0), up=(1, 0, 0))
    params = IterParams(max_iter=100)
    out = {}
    for name in ("cython", "python"):
        mod = kernels.load_backend(name)
        orig = kernels.raymarch
        kernels.raymarch = mod.raymarch
        try:
            out[name] = raymarch_image(P, spec, opts, params, threads=1)
        finally:
            kernels.raymarch = orig
    a, b = out["cython"], out["python"]
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.image, b.image)
    np.testing.assert_allclose(a.depth, b.depth, rtol=1e-12)


def test_thread_count_does_not_change_results(backend):
    rng = np.random.default_rng(9)
    z = rng.uniform(-2, 2, 40_000) + 1j * rng.uniform(-2, 2, 40_000)
    p = ComplexPoly([-0.8 + 0.156j, 0, 1])
    one = component_orbits(p, z, IterParams(max_iter=200), threads=1)
    many = component_orbits(p, z, IterParams(max_iter=200), threads=4)
    for x, y in zip(one, many):
        assert x.tobytes() == y.tobytes()
