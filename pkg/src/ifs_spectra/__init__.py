"""Spectra of invariant measures of affine iterated function systems.

Given an expansive integer matrix R and digit sets B, L forming a Hadamard
triple, this package finds the extreme cycles and invariant line sets of the
dual system, assembles candidate Fourier spectra, and verifies numerically
that they form orthogonal exponential bases.
"""

from .dynamics import Catalog, Cycle, InvariantLineSet, build_catalog, extreme_cycles
from .lattice import IntMatrix, RationalMatrix, is_expansive
from .measure import FourierEvaluator, MeasureSampler, WeightFunction, quadrature_check
from .spectrum import Spectrum, assemble_spectrum, product_spectrum
from .triple import FactoredTriple, HadamardTriple, conjugate, factor_along, validate_hadamard
from .verify import VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "Cycle",
    "FactoredTriple",
    "FourierEvaluator",
    "HadamardTriple",
    "IntMatrix",
    "InvariantLineSet",
    "MeasureSampler",
    "RationalMatrix",
    "Spectrum",
    "VerificationReport",
    "WeightFunction",
    "assemble_spectrum",
    "build_catalog",
    "conjugate",
    "extreme_cycles",
    "factor_along",
    "is_expansive",
    "product_spectrum",
    "quadrature_check",
    "run_verification",
    "validate_hadamard",
    "__version__",
]
