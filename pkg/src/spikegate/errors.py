"""Typed errors raised across the package.

Everything derives from :class:`SpikegateError` (a ``ValueError``), so callers
can catch broadly or per condition. Parse errors carry the 1-based line number
of the offending line when one exists.
"""


class SpikegateError(ValueError):
    """Base class for all errors raised by this package."""


# --- domain type invariants -------------------------------------------------

class NonFinite(SpikegateError):
    """A value that must be finite is NaN or infinite."""


class NonPositiveDt(SpikegateError):
    """Sample interval must be positive and finite."""


class InvalidSegment(SpikegateError):
    """Light segment violates its invariants (duration, intensity/source)."""


class NegativeIntensity(SpikegateError):
    """Light intensity below zero."""


class OverlappingSegments(SpikegateError):
    """Two light segments overlap in time."""


class UnknownSource(SpikegateError):
    """Light source name not one of white/black/off."""


class InvalidParams(SpikegateError):
    """Parameter set violates its documented invariants."""


# --- parsing ------------------------------------------------------------------

class ParseError(SpikegateError):
    """Base for text-format errors.

    ``line`` is the 1-based data-row number (headers, comments, and blank
    lines are not counted), or None when no single row is at fault.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"row {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedRow(ParseError):
    pass


class NonMonotonicTime(ParseError):
    pass


class NonUniformSpacing(ParseError):
    pass


class EmptyFile(ParseError):
    pass


class MismatchedSeries(SpikegateError):
    """Series passed to the writer disagree on t0, dt, or length."""


# --- simulation ---------------------------------------------------------------

class NonPositiveDiameter(SpikegateError):
    pass


# --- analysis -----------------------------------------------------------------

class BadEdges(SpikegateError):
    """Histogram edges are too few or not strictly increasing."""


class EmptyInput(SpikegateError):
    pass


class TooShort(SpikegateError):
    """Input series shorter than the operation requires."""


class NoPeak(SpikegateError):
    """Spectrum has no energy outside the DC bin."""


class NonPositiveWindow(SpikegateError):
    pass


class InvalidRange(SpikegateError):
    pass


# --- gaussian fitting -----------------------------------------------------------

class NonPositiveSigma(SpikegateError):
    pass


class TooFewValues(SpikegateError):
    pass


class DegenerateData(SpikegateError):
    """All values equal; a Gaussian MLE does not exist."""


# --- gate mining ----------------------------------------------------------------

class MissingInputPair(SpikegateError):
    """No stimulation trial supplied for one of the input pairs 01/10/11."""


class UnknownInputLabel(SpikegateError):
    pass


class LengthMismatch(SpikegateError):
    pass


class TooFewInputs(SpikegateError):
    pass


# --- frequency modulation ---------------------------------------------------------

class NyquistViolation(SpikegateError):
    """Sample rate too low for the requested carrier and deviation.

    ``strict_bound`` (2*(carrier+deviation), the bound enforced here) keeps the
    upper sideband below Nyquist; ``textbook_bound`` (2*carrier) is the looser
    folk criterion, quoted for reference.
    """

    def __init__(self, sample_rate_hz, carrier_hz, deviation_hz):
        self.sample_rate_hz = sample_rate_hz
        self.carrier_hz = carrier_hz
        self.deviation_hz = deviation_hz
        self.strict_bound = 2.0 * (carrier_hz + deviation_hz)
        self.textbook_bound = 2.0 * carrier_hz
        super().__init__(
            f"sample rate {sample_rate_hz:g} Hz is below the enforced bound "
            f"2*(carrier+deviation) = {self.strict_bound:g} Hz "
            f"(looser 2*carrier bound: {self.textbook_bound:g} Hz)"
        )


class EmptyMessage(SpikegateError):
    pass


class ZeroDeviation(SpikegateError):
    pass


class DegenerateInput(SpikegateError):
    pass


# --- CLI ---------------------------------------------------------------------------

class UnknownProfile(SpikegateError):
    pass


#: Errors the CLI maps to exit code 2 (usage) rather than 1 (data/runtime).
USAGE_ERRORS = (
    UnknownProfile,
    MissingInputPair,
    NyquistViolation,
    LengthMismatch,
    TooFewInputs,
)
