"""Heat kernel of a slab with symmetric Robin walls, built from image sources.

Bi = L * lambda / 2 throughout (not the common lambda * L).
"""

from .eigen_oracle import EigenBasis, basis_for, eigen_green_z, eigen_uniform_temp, find_roots, modes_needed
from .errors import (
    BetaOverflowError,
    CapacityError,
    ConvergenceError,
    DomainError,
    NumericalError,
    PrecisionLossError,
    SlabGreenError,
    ValidityError,
)
from .image_kernel import (
    DEFAULT_POLICY,
    ScaledVars,
    SeriesValue,
    SlabConfig,
    TruncationPolicy,
    green_3d,
    green_halfspace,
    green_z,
    green_z_dirichlet,
    green_z_neumann,
    image_term,
    p_coeff,
    tail_majorant,
    truncation_N,
)
from .special_fn import FSequence, beta_k, beta_sequence, binomial, erfc, erfcx, f_k
from .temp_field import (
    LayerCoefficients,
    TemperatureField,
    delta_temp,
    l_coeffs,
    temp,
    temp_dirichlet,
    temp_large_lambda,
    temp_quadrature,
    temp_thick,
    temperature_field,
)

__version__ = "0.1.0"

__all__ = [
    "basis_for",
    "beta_k",
    "beta_sequence",
    "BetaOverflowError",
    "binomial",
    "CapacityError",
    "ConvergenceError",
    "DEFAULT_POLICY",
    "delta_temp",
    "DomainError",
    "eigen_green_z",
    "eigen_uniform_temp",
    "EigenBasis",
    "erfc",
    "erfcx",
    "f_k",
    "find_roots",
    "FSequence",
    "green_3d",
    "green_halfspace",
    "green_z",
    "green_z_dirichlet",
    "green_z_neumann",
    "image_term",
    "l_coeffs",
    "LayerCoefficients",
    "modes_needed",
    "NumericalError",
    "p_coeff",
    "PrecisionLossError",
    "ScaledVars",
    "SeriesValue",
    "SlabConfig",
    "SlabGreenError",
    "tail_majorant",
    "temp",
    "temp_dirichlet",
    "temp_large_lambda",
    "temp_quadrature",
    "temp_thick",
    "temperature_field",
    "TemperatureField",
    "truncation_N",
    "TruncationPolicy",
    "ValidityError",
]
