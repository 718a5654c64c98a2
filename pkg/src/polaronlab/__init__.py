"""Classical polaron dynamics with ultraviolet cutoff, its Gross dressing, and a desk-scale quantum cross-check."""

from .phasespace import (
    DimensionError,
    KGrid,
    ParameterError,
    PhasePoint,
    WeightSpec,
    h_norm,
    inner,
    make_grid,
    smooth_field,
    symplectic_form,
    weighted_norm,
)
from .formfactor import FormFactorSet, ModelParams, closed_form_scalars, form_factors, pair, translate
from .energy import energy_dressed, energy_dressing, energy_undressed, gradient, hamilton_field
from .dressing import DressingMap, check_symplectic, differential
from .dressing import apply as dress
from .dynamics import (
    FlowConfig,
    IntegrationError,
    PicardRefusal,
    Trajectory,
    characteristic_residual,
    dressed_flow_conjugated,
    free_flow,
    integrate,
    local_existence_time,
    lipschitz_constant,
    picard_solve,
    symbol_m,
    vector_field,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError", "ParameterError", "KGrid", "PhasePoint", "WeightSpec", "make_grid", "smooth_field",
    "h_norm", "inner", "symplectic_form", "weighted_norm",
    "ModelParams", "FormFactorSet", "form_factors", "translate", "pair", "closed_form_scalars",
    "energy_undressed", "energy_dressed", "energy_dressing", "gradient", "hamilton_field",
    "DressingMap", "dress", "differential", "check_symplectic",
    "FlowConfig", "Trajectory", "IntegrationError", "PicardRefusal", "free_flow", "vector_field", "integrate",
    "dressed_flow_conjugated", "lipschitz_constant", "local_existence_time", "picard_solve", "symbol_m",
    "characteristic_residual",
]
