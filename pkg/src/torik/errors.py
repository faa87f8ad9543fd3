"""Exception hierarchy."""


class TorikError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(TorikError, ValueError):
    pass


class DegenerateInput(TorikError, ValueError):
    pass


class UnsupportedDimension(TorikError, ValueError):
    pass


class NotReflexive(TorikError, ValueError):
    pass


class ModeMismatch(TorikError, ValueError):
    """Concavity/convexity of a PL function does not fit the filtration direction."""


class NoUnipotentRoot(TorikError):
    """The automorphism group is reductive; there is nothing to normalise."""


class UnsupportedAutomorphismStructure(TorikError):
    """More than one unipotent root."""


class InvalidUAction(TorikError, ValueError):
    pass


class InvalidMonomial(TorikError, ValueError):
    pass


class InvalidInput(TorikError, ValueError):
    pass


class ParseError(TorikError, ValueError):
    pass


class InternalInvariantError(TorikError, AssertionError):
    """A self-check that must hold mathematically has failed."""
