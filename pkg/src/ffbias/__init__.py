"""Bias of lambda(f) chi_m(f) and mu(f) chi_m(f) over monic polynomials in F_q[T]."""

__version__ = "0.1.0"

from .biasseries import (
    BiasSeries,
    RationalGF,
    Recurrence,
    ResourceGuardError,
    brute_force,
    cumulative_gf,
    empirical_densities,
    expand,
    gf_lambda,
    gf_mu,
    nth_term_fast,
    recurrence_from,
)
from .density import (
    GSHViolation,
    OscillatoryModel,
    SymmetricConstants,
    TorusRegion,
    density_lambda,
    density_mu,
    kw_density_check,
    model_densities,
    oscillatory_model,
    periodic_density,
    symmetric_constants,
    torus_measure,
)
from .ffpoly import DomainError, FieldSpec, Poly, PolyParseError, enumerate_monic, format_poly, parse_poly
from .lfunc import (
    IntegrityError,
    InverseZeroData,
    LPolynomial,
    central_l_value,
    gsh_diagnostic,
    inverse_zeros,
    l_polynomial,
)
from .multfunc import Factorization, chi, factor, is_irreducible, jacobi, liouville, mobius
from .report import DensityReport
