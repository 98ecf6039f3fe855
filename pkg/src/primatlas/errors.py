"""Domain errors. Each carries a stable ``kind`` used by the CLI error envelope."""


class PrimAtlasError(Exception):
    @property
    def kind(self) -> str:
        return type(self).__name__


class ZeroVector(PrimAtlasError):
    pass


class NotPrimitive(PrimAtlasError):
    pass


class InfiniteOrder(PrimAtlasError):
    pass


class NotScalar(PrimAtlasError):
    pass


class UnsupportedProfile(PrimAtlasError):
    pass


class PartialKnowledge(PrimAtlasError):
    """The question is well posed but the classification rules do not settle it."""


class EvenM(PrimAtlasError):
    pass


class BoundExceeded(PrimAtlasError):
    pass


class NotUnimodular(PrimAtlasError):
    pass


class CaseMismatch(PrimAtlasError):
    pass


class StratumMismatch(PrimAtlasError):
    pass


class StabilizerMismatch(PrimAtlasError):
    pass


class DimMismatch(PrimAtlasError):
    pass


class NumericalFailure(PrimAtlasError):
    pass


class UnsupportedCosetSpace(PrimAtlasError):
    pass


class PrimMismatch(PrimAtlasError):
    pass


class FrameMismatch(PrimAtlasError):
    pass


class InvalidValue(PrimAtlasError):
    """Input violates a value-level precondition (bad angle, non-positive parameter...)."""
