"""Expected number of u-sharp zero crossings of random polynomials whose
coefficients are successive points of a Brownian path."""

__version__ = "0.1.0"

from .asymptotics import (AsymptoticResult, ConstantTable, PUBLISHED_CONSTANTS,
                          PUBLISHED_THEOREM, constant_table, consistency_checks,
                          theorem_i, theorem_ii)
from .errors import (DegenerateModel, DegenerateOracle, DomainError,
                     GridTooCoarseWarning, SharpCrossError, ToleranceNotMet)
from .kac_rice import (ExpectedCount, SharpSpec, density_at, density_oracle, expected_count,
                       expected_count_split)
from .model import CoefficientModel, Moments, moments_at, moments_direct
from .monte_carlo import CrossingRecord, McConfig, McEstimate, estimate, find_crossings, sample_path
from .quadrature import QuadratureConfig

__all__ = [
    "AsymptoticResult", "ConstantTable", "PUBLISHED_CONSTANTS", "PUBLISHED_THEOREM",
    "constant_table", "consistency_checks", "theorem_i", "theorem_ii",
    "DegenerateModel", "DegenerateOracle", "DomainError",
    "GridTooCoarseWarning", "SharpCrossError", "ToleranceNotMet",
    "ExpectedCount", "SharpSpec", "density_at", "density_oracle", "expected_count",
    "expected_count_split", "CoefficientModel", "Moments", "moments_at", "moments_direct",
    "CrossingRecord", "McConfig", "McEstimate", "estimate", "find_crossings", "sample_path",
    "QuadratureConfig",
]
