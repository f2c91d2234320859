"""Exact q-series, q-difference structure, state-integral and
stationary-phase numerics attached to the (-2,3,7)-pretzel knot."""

__version__ = "0.1.0"

# bump when exact formulas change: invalidates on-disk caches
CODE_REVISION = "2025.1"

from .rings import (QQ, NumberField, NumberFieldSpec, NFElement, LambdaPoly,
                    XI_FIELD, ETA_FIELD, bernoulli_half)
from .series import DENOM, PuiseuxSeries
from .laurent import LaurentBivariate
from .qseries import (SeriesFamilyKey, EisensteinCache, eisenstein, h_plus,
                      h_minus, h_series, h_wrapped, p_poly, r_approximant,
                      symmetry_check, gz_comparison)
from .qdiff import (recurrence_residual, wronskian, wronskian_det,
                    orthogonality_residual, quadratic_relation,
                    verify_symbolic_selfduality)
from .statphase import (CriticalPoint, critical_points, polylog_nonpos,
                        v_table, gaussian_expand, phi_hat_numeric)
from .numerics import (ModularPair, ContourSpec, faddeev, descendant_Z,
                       descendant_Z_hat, factorization_residual,
                       cocycle_matrices, eta_quotient_check)
from .radial import (RadialSample, MatchReport, radial_samples, richardson,
                     asymptotic_match)

__all__ = [
    "QQ", "NumberField", "NumberFieldSpec", "NFElement", "LambdaPoly",
    "XI_FIELD", "ETA_FIELD", "bernoulli_half", "DENOM", "PuiseuxSeries",
    "LaurentBivariate", "SeriesFamilyKey", "EisensteinCache", "eisenstein",
    "h_plus", "h_minus", "h_series", "h_wrapped", "p_poly", "r_approximant",
    "symmetry_check", "gz_comparison", "recurrence_residual", "wronskian",
    "wronskian_det", "orthogonality_residual", "quadratic_relation",
    "verify_symbolic_selfduality", "CriticalPoint", "critical_points",
    "polylog_nonpos", "v_table", "gaussian_expand", "phi_hat_numeric",
    "ModularPair", "ContourSpec", "faddeev", "descendant_Z",
    "descendant_Z_hat", "factorization_residual", "cocycle_matrices",
    "eta_quotient_check", "RadialSample", "MatchReport", "radial_samples",
    "richardson", "asymptotic_match",
]
