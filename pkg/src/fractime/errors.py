"""Exception hierarchy shared by all fractime modules."""


class FractimeError(Exception):
    """Base class for all errors raised by this package."""


class GridError(FractimeError):
    """Invalid time grid, or operands living on incompatible grids."""


class GammaPoleError(FractimeError):
    """Gamma function requested at a nonpositive integer."""


class OutOfRangeError(FractimeError):
    """Argument outside the validated evaluation domain."""


class PrecisionLossError(FractimeError):
    """A series evaluation could not reach the target accuracy."""


class UnsupportedOperatorError(FractimeError):
    """Differential-operator term with a derivative power we do not embed."""


class NonInvertibleError(FractimeError):
    """Velocity-to-momentum map could not be inverted numerically."""


class DivergenceError(FractimeError):
    """A time stepper produced non-finite or exploding state."""


class CoverageError(FractimeError):
    """A sampled internal time exceeded the solved classical horizon."""


class DegenerateSampleError(FractimeError):
    """A Monte Carlo sample is degenerate (e.g. all counts zero)."""


class ConfigError(FractimeError):
    """Invalid experiment configuration value."""
