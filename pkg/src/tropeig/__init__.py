"""Polynomial eigenvalue solver with tropical scaling of the companion linearization."""

from .analysis import SplittingReport, cond2, eigenvalue_variation, verify_splitting, xi_spectrum
from .errors import (
    DegenerateBlockError,
    InvalidEigenvectorError,
    InvalidPolynomialError,
    NotApplicableError,
    ScalingOverflowError,
    SolverFailure,
    TropeigError,
)
from .genzeig import GeneralizedEigenpair, generalized_eig
from .matpoly import (
    MatrixPolynomial,
    Pencil,
    companion_first,
    gamma_vector,
    induced_2norm,
    random_pencil,
    scale,
)
from .scaled_solver import ScalingStrategy, SolvedEigenpair, backward_error, extract_eigvec, solve
from .tropical import NewtonPolygon, TropicalPoly, TropicalRoots, eval_maxtimes, newton_polygon, tropical_roots

__version__ = "0.1.0"
