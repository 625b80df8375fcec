"""Casimir interaction between two concentric cylinders at zero and finite
temperature: mode-sum numerics for Dirichlet/Neumann scalar channels and the
two ideal electromagnetic configurations, plus the small-gap expansions."""

from .asymptotics import (
    ZETA3,
    DebyeCoefficients,
    ExpansionResult,
    MellinCheckReport,
    expansion,
    mellin_A,
    mellin_B,
    mellin_C,
    mellin_G,
    mellin_integral_check,
    pfa_leading,
    script_e,
    script_e_n0,
)
from .energy import (
    DEFAULT_SPEC,
    REGIME_CLASSICAL,
    REGIME_MATSUBARA,
    REGIME_POISSON,
    REGIME_THERMAL_LEADING,
    REGIME_ZERO_T,
    EnergyResult,
    NumericsSpec,
    ThermalState,
    abel_plana_phase,
    classical_term,
    free_energy_matsubara,
    thermal_correction_poisson,
    thermal_leading,
    zero_temperature_energy,
    zero_temperature_energy_double_form,
)
from .errors import GammaPoleError, IntegralDivergenceError, ToleranceError
from .kernel import (
    ALL_CONFIGS,
    DD,
    DIRICHLET,
    DN,
    EM_CONFIGS,
    ND,
    NEUMANN,
    NN,
    PCIP,
    PCPC,
    SCALAR_CONFIGS,
    CylinderGeometry,
    FieldConfig,
    ModeValue,
    cutoff_estimate,
    log1m_signed_exp,
    mode_a,
    mode_m,
)
from .special import (
    DebyeData,
    LogSigned,
    bessel_i_scaled,
    bessel_j,
    bessel_j_prime,
    bessel_k_scaled,
    bessel_y,
    bessel_y_prime,
    debye,
    log_bessel_ik,
    log_ratio_ik,
)

__version__ = "0.1.0"
