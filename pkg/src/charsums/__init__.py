"""Character sums over finite fields: oracles and improved Weil-type bounds."""

from .ffield import (
    FieldCtx,
    ExtCtx,
    FqElem,
    make_field,
    make_ext,
    trace,
    norm,
    embed,
    elements,
    dlog,
    elem,
)
from .polyring import Poly
from .charsum import (
    AdditiveChar,
    MultChar,
    gauss_sum,
    sum_additive,
    sum_multiplicative,
    fiber_sum_additive,
    fiber_sum_multiplicative,
    double_sum_check,
    weil_descent_check,
)
from .invariance import (
    ASReduction,
    as_reduce,
    decompose_translation,
    decompose_homothety,
    mth_power_test,
)
from .localdata import LaurentTail, LocalData, compute_local_data
from .boundbook import (
    BoundReport,
    bound_constant_additive,
    bound_constant_multiplicative,
    homothety_bound,
    homothety_fiber_bound,
    resultant_sequence,
    weil_bound_additive,
    weil_bound_multiplicative,
)

__all__ = [
    "FieldCtx",
    "ExtCtx",
    "FqElem",
    "make_field",
    "make_ext",
    "trace",
    "norm",
    "embed",
    "elements",
    "dlog",
    "elem",
    "Poly",
    "AdditiveChar",
    "MultChar",
    "gauss_sum",
    "sum_additive",
    "sum_multiplicative",
    "fiber_sum_additive",
    "fiber_sum_multiplicative",
    "double_sum_check",
    "weil_descent_check",
    "ASReduction",
    "as_reduce",
    "decompose_translation",
    "decompose_homothety",
    "mth_power_test",
    "LaurentTail",
    "LocalData",
    "compute_local_data",
    "BoundReport",
    "bound_constant_additive",
    "bound_constant_multiplicative",
    "homothety_bound",
    "homothety_fiber_bound",
    "resultant_sequence",
    "weil_bound_additive",
    "weil_bound_multiplicative",
]
