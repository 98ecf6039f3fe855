"""Exact and numerical tools for the primitive spectrum of SL3(Z) acting on SL3(R)/U3(R)."""

from .errors import PrimAtlasError
from .exactnum import THETA, DEFAULT_ENCLOSURE, QTheta, ThetaEnclosure, TorusElem, IntMatrix, sign

__version__ = "0.1.0"

__all__ = ["PrimAtlasError", "THETA", "DEFAULT_ENCLOSURE", "QTheta", "ThetaEnclosure", "TorusElem",
           "IntMatrix", "sign", "__version__"]
