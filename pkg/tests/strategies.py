"""Hypothesis strategies and tolerance helpers shared by the tests."""
from hypothesis import strategies as st

from bcjulia import core
from bcjulia.core import Bicomplex


def _no_tiny(x: float) -> bool:
    # squares of |x| < 1e-100 underflow, which breaks exact-zero reasoning
    return x == 0.0 or abs(x) > 1e-100


reals = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False).filter(_no_tiny)
small_reals = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False).filter(_no_tiny)
bicomplex = st.builds(Bicomplex.from_reals, reals, reals, reals, reals)
small_bicomplex = st.builds(Bicomplex.from_reals, small_reals, small_reals, small_reals, small_reals)
complexes = st.builds(complex, reals, reals)


def close(a: Bicomplex, b: Bicomplex, rel: float, scale: float = 1.0) -> bool:
    return core.norm(core.sub(a, b)) <= rel * max(scale, 1e-300)


def cclose(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
