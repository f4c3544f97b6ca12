"""Typed errors shared across the package."""


class CyclenfError(Exception):
    """Base class for all package errors."""


class SeriesKindError(CyclenfError, TypeError):
    """Arithmetic between incompatible series kinds."""


class NotAUnitError(CyclenfError, ValueError):
    """Inversion of a series whose constant term is (numerically) zero."""


class BranchError(CyclenfError, ValueError):
    """Logarithm requested outside the fixed branch ball around 1."""


class BandwidthOverflowError(CyclenfError, ValueError):
    """A chart substitution would exceed the tracked Laurent bandwidth."""


class TorsionError(CyclenfError, ArithmeticError):
    """A small divisor fell below the resonance tolerance.

    Carries the offending order so callers can report which power of the
    normal-bundle constant degenerated.
    """

    def __init__(self, order, divisor):
        self.order = int(order)
        self.divisor = float(divisor)
        super().__init__(
            f"torsion/resonance at order n={self.order}: |1 - t^n| = {self.divisor:.3e}"
        )


class NotExtendableError(CyclenfError, ValueError):
    """Order-zero slices do not glue to a function across the node."""
