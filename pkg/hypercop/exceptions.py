"""Custom exceptions for hypercop."""


class HypercopError(Exception):
    """Base exception for all hypercop errors."""


class OutsideDisk(HypercopError):
    """Raised when a point is constructed on or outside the unit circle."""


class CoincidentPoints(HypercopError):
    """Raised when an operation needs two distinct points and gets one."""


class NumericalDomain(HypercopError):
    """Raised when an acosh/atanh argument leaves its domain beyond tolerance."""


class BadParameters(HypercopError):
    """Raised when numeric parameters are outside their documented range."""


class NotHyperbolic(HypercopError):
    """Raised when a regular polygon with the requested angle is not hyperbolic."""


class BadGenus(HypercopError):
    """Raised when a surface is requested with an unsupported genus."""


class PairingMismatch(HypercopError):
    """Raised when a side pairing or corner cycle fails validation."""


class ReductionDiverged(HypercopError):
    """Raised when a point cannot be reduced into the fundamental polygon."""


class BallTooLarge(HypercopError):
    """Raised when a deck-group ball would exceed the configured element cap."""


class DivergenceExhausted(HypercopError):
    """Raised when an agility function cannot fill a phase window."""


class MoveTooLong(HypercopError):
    """Raised when a step exceeds the mover's budget."""


class OutOfTurn(HypercopError):
    """Raised when a player acts outside its turn."""


class PolicyFailure(HypercopError):
    """Raised when a policy keeps proposing invalid moves or crashes."""


class PhaseConstructionFailed(HypercopError):
    """Raised when the two-cop controller cannot anchor its second cop."""


class NotEnclosed(HypercopError):
    """Raised when the cops' bisectors do not bound a compact region."""


class LocalizationLost(HypercopError):
    """Raised when the robber's sector cannot be decided within tolerance."""


class DegenerateConfiguration(HypercopError):
    """Raised when a strategy meets a degenerate configuration."""


class UnknownCheck(HypercopError):
    """Raised when a verification check id is not known."""


class ConfigInvalid(HypercopError):
    """Raised when there are configuration issues."""


class SerializationError(HypercopError):
    """Raised when there are issues serializing/deserializing data."""
