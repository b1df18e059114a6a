"""Exception types shared across the package."""


class HolovecError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionMismatchError(HolovecError, ValueError):
    """Vector lengths that were required to agree do not."""


class ParseError(HolovecError, ValueError):
    """An input file does not conform to its documented format."""


class IntegrityError(HolovecError, ValueError):
    """A file parsed cleanly but its contents are internally inconsistent."""


class UnknownTagError(HolovecError, ValueError):
    """An annotation names a POS tag or NER type the codebook does not carry."""


class UnknownKeyError(HolovecError, KeyError):
    """A requested key is absent from a vector space."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""
