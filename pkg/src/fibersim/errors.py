"""Exception types shared across fibersim modules."""


class FibersimError(Exception):
    """Base class for all fibersim errors."""


class SingularMatrix(FibersimError):
    """2x2 matrix inversion requested below the determinant threshold."""


class InadmissibleConfig(FibersimError):
    """A configuration violates the safety constraint |cM - cN| >= 2."""


class InvalidParameters(FibersimError):
    """Mechanism parameters outside their allowed range."""


class BasePointMismatch(FibersimError):
    """Initial config does not sit over the start of the base path."""


class NonFiniteState(FibersimError):
    """Integration produced NaN or infinite state components."""


class FiberMismatch(FibersimError):
    """Two configs expected in the same fiber have different base points."""


class DegenerateGeometry(FibersimError):
    """Disk-based collision queries on the offset-conserving mechanism."""


class ScenarioError(FibersimError):
    """Malformed scenario file; message carries a field diagnostic."""
