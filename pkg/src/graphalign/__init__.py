"""Graph alignment via convex relaxations of the quadratic assignment
problem, with a seeded experiment harness and a dual-certificate verifier."""

from .assignment import (
    AssignmentResult,
    brute_force_qap,
    greedy_round,
    hungarian_max,
    hungarian_round,
    overlap_fraction,
)
from .certificate import (
    CertificateBundle,
    CertificateReport,
    build_certificate,
    check_claim5,
    check_claim6,
    check_claim7,
    check_claim8,
    lemma4_bound,
    lemma5_bound,
)
from .estimators import BirkhoffAligner, SimplexAligner, SpectralAligner
from .exceptions import (
    DegenerateCertificate,
    GraphAlignError,
    InvalidInput,
    MissingCrossing,
    NumericalFailure,
)
from .linalg import EigenDecomposition, commutator_residual, frob_norm, sym_eigen
from .models import (
    WignerPair,
    derive_seed,
    make_rng,
    perm_to_matrix,
    sample_goe,
    sample_permutation,
    sample_wigner_pair,
)
from .solvers import (
    GrampaCoefficients,
    SolverReport,
    gradient,
    objective,
    population_distance,
    population_optimum,
    solve_birkhoff,
    solve_grampa,
    solve_simplex,
)

__version__ = "0.1.0"
