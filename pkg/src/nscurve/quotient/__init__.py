"""The quotient system in the coordinates x = density, y = temperature."""

from .characteristics import characteristic_fields, directional_derivative, integrate_characteristic
from .equations import R2_VARIANTS, QuotientResidual, quotient_equations, quotient_residual
from .families import POWER_BRANCHES, ideal_gas_quotient, vdw_quotient
from .fields import NAMES, QuotientFields, constant_fields, zero_fields
from .flows import (
    ScalingFlow,
    in_prop2_class,
    prop1_flow,
    prop1_generator,
    prop2_flow,
    prop2_generator,
    pushforward,
    translation_flow,
)
from .symbol import SymbolData, det_scale, symbol_det, symbol_from_equations, symbol_matrix
