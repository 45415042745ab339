"""Exact verification of the LG/CY and localized-mirror-functor constructions for the elliptic curve."""
from .qseries import DEFAULT_CUTOFF, NovikovSeries
from .ring import GradedPolynomial, build_W
from .mfcat import MatrixFactorization, MFMorphism, mf_validate, is_null_homotopic

__all__ = ["DEFAULT_CUTOFF", "NovikovSeries", "GradedPolynomial", "build_W",
           "MatrixFactorization", "MFMorphism", "mf_validate", "is_null_homotopic"]
__version__ = "0.1.0"
