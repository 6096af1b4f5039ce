"""Exact Grassmann algebra, even supermatrices and trace formulas for the Berezinian."""

from .errors import BerezError, DomainError, InputError, NonGeneric, NotInvertible, ParityError
from .grassmann import EvenPoly, GrassmannElement, Parity, eval_poly, grassmann_inv, grassmann_mul
from .supermatrix import (
    Supermatrix,
    berezinian_classical,
    even_block_det,
    exp_soul,
    inverse,
    matmul,
    matpow,
    supertrace,
)
from .invariants import (
    ber_minus,
    ber_plus,
    berezinian_via_traces,
    char_coeffs,
    char_function,
    denominator_coeffs,
    dual_coeffs,
    gamma_seq,
    hankel_det,
    min_poly,
    numerator_coeffs,
    power_traces,
    resultant,
)

__version__ = "0.1.0"
