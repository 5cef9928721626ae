"""Exception types raised by the bicomplex algebra and dynamics code."""


class BicomplexError(Exception):
    """Base class for all errors raised by :mod:`bcjulia`."""


class NullConeError(BicomplexError, ZeroDivisionError):
    """Division by a zero divisor (an element of the null-cone)."""


class DegreeError(BicomplexError, ValueError):
    """A polynomial has too small a degree for the requested operation."""


class DegenerateError(BicomplexError, ValueError):
    """A bicomplex polynomial has a leading coefficient in the null-cone,
    or degree below 2, so its dynamics do not split into two planar
    polynomials of full degree."""


class ParseError(BicomplexError, ValueError):
    """Malformed polynomial or bicomplex literal."""
