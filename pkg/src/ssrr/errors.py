"""Typed errors raised by the flow routines.

Root-finders and the CLI dispatch on these, so library code raises the
most specific class that applies and never returns clamped values.
"""


class FlowError(Exception):
    """Base class for physical/regime errors raised by this package."""


class VacuumError(FlowError):
    """The Bernoulli argument left the range of the pressure integral."""


class NoShockError(FlowError):
    """Upstream normal pseudo-velocity is sonic or subsonic; no compressive jump."""


class DegenerateShockError(FlowError):
    """Vanishing shock strength where a finite jump is required."""


class NoPolarError(FlowError):
    """Upstream state is pseudo-subsonic at the requested point."""


class NotStrongTypeError(FlowError):
    """A strong-type reflected shock is required but not available."""


class NotEllipticError(FlowError):
    """Downstream state is not pseudo-subsonic where ellipticity is required."""


class DegenerateThetaError(FlowError):
    """Wall/shock-tangent angle is 90 degrees; corner construction undefined."""


class FieldFormatError(FlowError):
    """A field file or grid mask violates the SSRR-FIELD contract."""


class ConfigError(FlowError):
    """Invalid run configuration (CLI exit code 2)."""
