"""Exception types raised by the package."""


class AncestryError(Exception):
    """Base class for every error raised by ancestry_labels."""


class MalformedTree(AncestryError, ValueError):
    pass


class EmptyInput(AncestryError, ValueError):
    pass


class StrategyViolation(AncestryError):
    """A b-choice strategy returned b(u) < a_bar(u)."""


class RangeExceeded(AncestryError, ArithmeticError):
    """An exponent k fell outside [0, 4 z^2)."""


class LabelFormat(AncestryError, ValueError):
    pass


class LabelOverflow(AncestryError, OverflowError):
    """Value does not fit in the requested number of bits."""


class BadSplit(AncestryError, ValueError):
    pass


class BadSpec(AncestryError, ValueError):
    pass
