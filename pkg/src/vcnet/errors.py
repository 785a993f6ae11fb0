"""Exception hierarchy shared by all vcnet modules."""


class VcnetError(Exception):
    """Base class for all errors raised by this package."""


class NetParseError(VcnetError):
    """Malformed input document; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormulaParseError(VcnetError):
    """Malformed formula text; carries the offending character position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)
        self.position = position


class OneSafetyViolation(VcnetError):
    """Firing would put a second token on a place."""

    def __init__(self, place, transition, marking):
        super().__init__(
            f"firing {transition!r} adds a second token to {place!r} "
            f"at marking {{{', '.join(sorted(marking))}}}"
        )
        self.place = place
        self.transition = transition
        self.marking = marking


class NotEnabled(VcnetError):
    """Transition fired while some input place is empty."""


class LimitExceeded(VcnetError):
    """State-space exploration hit its node limit."""

    def __init__(self, message, explored=None):
        super().__init__(message)
        self.explored = explored


class InvalidCover(VcnetError):
    """Claimed vertex cover leaves a flow-graph edge uncovered."""


class StructuralViolation(VcnetError):
    """A transition touches two places outside the special set."""


class AlphabetMismatch(VcnetError):
    """Automaton atoms are not contained in the special place set."""


class BudgetSpaceLimit(VcnetError):
    """Budget-vector search space is too large to enumerate."""


class SizeLimit(VcnetError):
    """Brute-force oracle input exceeds its supported size."""


class EngineDisagreement(VcnetError):
    """The two model-checking engines returned different verdicts."""
