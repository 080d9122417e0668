"""Exact arithmetic foundation: rationals, polynomials, real algebraic numbers, F-sqrt-F."""

from gmpy2 import mpq

from .poly import (
    Poly,
    UnsupportedDegreeError,
    count_real_roots,
    factor,
    isolate_real_roots,
    sturm_sequence,
)
from .field import (
    AlgebraicReal,
    FieldMismatchError,
    RealNumberField,
    algebraic_compare,
    compare_by_interval,
    get_field,
)
from .sqrtclass import (
    IncompatibleClassError,
    SqrtClassValue,
    canonical_radicand,
    divide_into_class,
    sqrt_of_field_element,
    sqrtclass_arithmetic,
)
from .signs import XVal, xis_zero, xsign, xval

poly_factor_rationals = factor

__all__ = [
    "mpq",
    "Poly",
    "UnsupportedDegreeError",
    "count_real_roots",
    "factor",
    "poly_factor_rationals",
    "isolate_real_roots",
    "sturm_sequence",
    "AlgebraicReal",
    "FieldMismatchError",
    "RealNumberField",
    "algebraic_compare",
    "compare_by_interval",
    "get_field",
    "IncompatibleClassError",
    "SqrtClassValue",
    "canonical_radicand",
    "divide_into_class",
    "sqrt_of_field_element",
    "sqrtclass_arithmetic",
    "XVal",
    "xis_zero",
    "xsign",
    "xval",
]
