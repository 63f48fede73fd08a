"""Exception and warning types shared by all simulator modules."""


class PebsimError(Exception):
    """Base class for all simulator errors."""


class InvalidInput(PebsimError):
    """A numeric argument is outside its documented domain."""


class DegenerateGeometry(PebsimError):
    """Two points are too close (< 1e-9 m) to define a direction or delay."""


class InvalidAltitude(PebsimError):
    """Requested orbital altitude is non-positive."""


class InvalidMask(PebsimError):
    """Elevation mask outside [0, pi/2)."""


class MissingBuildingClass(PebsimError):
    """An indoor user references a building class with no configured loss."""


class BranchUnsupported(PebsimError):
    """Requested a surface branch the panel mode does not provide."""


class NoisePowerZero(PebsimError):
    """Noise power is zero; the Fisher information is undefined."""


class InvalidScenario(PebsimError):
    """A scenario object does not satisfy the preconditions of an operation."""


class ParseError(PebsimError):
    """Configuration document is not syntactically valid JSON."""


class ValidationError(PebsimError):
    """Configuration document is well-formed but violates the schema.

    Carries the dotted path of the offending field, e.g.
    ``ris_panels[0].epsilon``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class GimbalWarning(UserWarning):
    """Departure angles are within 1e-6 rad of the boresight pole.

    Azimuth is ill-conditioned there; the angles themselves are still
    returned (azimuth fixed to 0 exactly at the pole).
    """
