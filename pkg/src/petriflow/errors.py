"""Exception hierarchy shared by all analysis modules."""


class PetriError(Exception):
    """Base class for every error raised by petriflow."""


class NetFormatError(PetriError):
    """Malformed `.pnet` input.  Carries 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UnboundParameterError(NetFormatError):
    pass


class NegativeWeightError(NetFormatError):
    pass


class DuplicateIdentifierError(NetFormatError):
    pass


class UnknownTransitionError(PetriError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownPlaceError(PetriError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotEnabledError(PetriError):
    """Firing attempted on a marking that does not enable the transition.

    `position` is the 1-based index in the fired word (1 for single fires).
    """

    def __init__(self, transition, position=1, marking=None):
        self.transition = transition
        self.position = position
        self.marking = marking
        super().__init__(
            f"transition {transition!r} not enabled at position {position}"
            + (f" (marking {marking})" if marking is not None else "")
        )


class DimensionError(PetriError, ValueError):
    pass


class ResourceLimitError(PetriError):
    """A configurable exploration cap was hit; the result would be partial."""


class NotASemiflowError(PetriError, ValueError):
    pass


class NotASupportError(PetriError, ValueError):
    pass


class DecompositionError(PetriError):
    """Greedy decomposition left a non-zero residual (generating set incomplete)."""

    def __init__(self, residual):
        self.residual = tuple(residual)
        super().__init__(f"non-zero residual {self.residual}")


class SemiringError(PetriError, ValueError):
    pass


class NoBoundError(PetriError):
    pass


class IncompleteGraphError(PetriError):
    pass


class PredicateError(PetriError, ValueError):
    pass
