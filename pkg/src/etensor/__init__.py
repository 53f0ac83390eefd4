"""Eigenvectors, determinants and E-characteristic polynomials of complex tensors."""

from .homotopy import SolutionSet, TrackerConfig, solve_projective, solve_square
from .polynomial import MultiPoly, MultiPolySystem, UniPoly, interpolate, poly_eval, poly_roots
from .resultant import DegreeProfile, build_layout, macaulay_resultant, sylvester_resultant
from .spectra import (
    CharPoly,
    EigenClass,
    EigenReport,
    determinant,
    e_eigenvalues,
    echar_poly,
    eigenpairs,
    minors_residual,
    projective_map_step,
)
from .tensor import (
    Tensor,
    apply_form,
    contract,
    diagonal_tensor,
    mode_transform,
    random_tensor,
    singular_tensor,
    slice_matrices,
    symmetrize,
)

__version__ = "0.1.0"

__all__ = [
    "CharPoly", "DegreeProfile", "EigenClass", "EigenReport", "MultiPoly", "MultiPolySystem",
    "SolutionSet", "Tensor", "TrackerConfig", "UniPoly", "apply_form", "build_layout", "contract",
    "determinant", "diagonal_tensor", "e_eigenvalues", "echar_poly", "eigenpairs", "interpolate",
    "macaulay_resultant", "minors_residual", "mode_transform", "poly_eval", "poly_roots",
    "projective_map_step", "random_tensor", "singular_tensor", "slice_matrices", "solve_projective",
    "solve_square", "sylvester_resultant", "symmetrize",
]
