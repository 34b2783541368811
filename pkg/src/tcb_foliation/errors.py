"""Exception hierarchy for the foliation toolkit."""

from typing import Any, Dict, Optional


class FoliationError(Exception):
    """Base class for every domain error raised by the toolkit."""

    invariant: str = "unspecified"

    def __init__(
        self,
        message: str,
        invariant: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        if invariant is not None:
            self.invariant = invariant
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI error JSON."""
        return {
            "error": {
                "type": self.__class__.__name__,
                "invariant": self.invariant,
                "message": self.message,
                "details": self.details,
            }
        }


class MixedRadicand(FoliationError):
    """Scalars from different quadratic fields were combined."""

    invariant = "scalar.shared_radicand"


class DivisionByZero(FoliationError, ZeroDivisionError):
    """Exact division by a zero Scalar."""

    invariant = "scalar.nonzero_divisor"


class ScalarSyntaxError(FoliationError, ValueError):
    """Text could not be parsed as a Scalar."""

    invariant = "scalar.text_format"


class Degenerate(FoliationError):
    """Exact boundary coincidence: the instance is not generic."""

    invariant = "genericity"


class InvariantViolation(FoliationError):
    """An internal invariant failed; signals a bug, not bad input."""

    invariant = "internal"


class NonTerminating(FoliationError):
    """An iteration hit its cap, which happens for rational ratios."""

    invariant = "iteration.cap"


class UnknownGenerator(FoliationError):
    """A word used a letter outside its alphabet."""

    invariant = "word.alphabet"


class CommonPower(FoliationError):
    """Both words of a pair are powers of one word."""

    invariant = "pair.not_common_power"


class NotCoprime(FoliationError):
    """Homology class is divisible."""

    invariant = "curve.indivisible"


class NonPositive(FoliationError):
    """A count that must be positive was not."""

    invariant = "curve.positive"


class MeasureMismatch(FoliationError):
    """Two tori glued along segments of different measure."""

    invariant = "glue.equal_measure"


class ZeroWord(FoliationError):
    """Operation requires a word of nonzero measure."""

    invariant = "code.nonzero"


class ClosedUp(FoliationError):
    """Zero endpoint shift: the word closes into a saddle connection."""

    invariant = "code.nonzero_shift"


class CapExceeded(FoliationError):
    """Requested enumeration exceeds the configured cap."""

    invariant = "enumeration.cap"


class InvalidCensus(FoliationError):
    """Saddle counts are inconsistent with the genus."""

    invariant = "census"


class GenusTooSmall(FoliationError):
    """Genus below the minimum for the requested construction."""

    invariant = "genus.minimum"


class ConservationViolated(FoliationError):
    """Transition measures break a conservation identity."""

    invariant = "conservation"


class WindowExhausted(FoliationError):
    """Translate search window reached its cap without a proven first hit."""

    invariant = "oracle.window"


class UnexpectedStreetCount(FoliationError):
    """Tracing found a number of streets other than three."""

    invariant = "streets.count"


class UnsupportedKind(FoliationError):
    """Unknown render kind."""

    invariant = "render.kind"


class InstanceFormatError(FoliationError, ValueError):
    """A JSON instance document is malformed."""

    invariant = "instance.format"
