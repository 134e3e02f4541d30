"""Log de Rham-Witt complex of the semistable special fiber in its canonical basis."""

from .axioms import axiom_report, box_basis
from .components import coordinates, fil_submodule, modulus, operator_matrix
from .forms import FD, Dlog, DVTeich, RawForm, Teich, VTeich, expression_to_raw
from .model import (
    DRWElement,
    basic,
    basic_expression,
    basis_elements,
    basis_index,
    component,
    dlog_monoid,
    drw_d,
    drw_F,
    drw_mul,
    drw_R,
    drw_V,
    lambda_map,
    normalize,
    normalize_expression,
    one,
    teichmuller_monomial,
    zero,
)
from .weights import (
    Partition,
    Weight,
    chain,
    dropped_index,
    enumerate_partitions,
    partition_stats,
    weight_stats,
    weights_in_box,
)

__all__ = [
    "DRWElement", "Dlog", "DVTeich", "FD", "Partition", "RawForm", "Teich", "VTeich", "Weight",
    "axiom_report", "basic", "basic_expression", "box_basis", "basis_elements", "basis_index", "chain", "component",
    "coordinates", "dlog_monoid", "dropped_index", "drw_F", "drw_R", "drw_V", "drw_d",
    "drw_mul", "enumerate_partitions", "expression_to_raw", "fil_submodule", "lambda_map",
    "modulus", "normalize", "normalize_expression", "one", "operator_matrix",
    "partition_stats", "teichmuller_monomial", "weight_stats", "weights_in_box", "zero",
]
