"""
Invariants of an even supermatrix built from supertraces.

Everything here past :func:`power_traces` is written against the scalar-ring
contract of :mod:`berez.grassmann`, so the same code runs over the even
Grassmann subalgebra and over :class:`~berez.grassmann.EvenPoly` (used to
treat ``A - z`` with ``z`` formal).

Index conventions: ``c_k = 0`` for ``k < 0`` and ``c*_k = 0`` for ``k > p - q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping, Sequence

from .errors import NonGeneric, NotInvertible
from .grassmann import EvenPoly, GrassmannElement
from .supermatrix import Supermatrix, berezinian_classical, even_block_det, inverse

__all__ = [
    "DENOMINATOR_HANKEL",
    "RESULTANT_SINGULAR",
    "CharFunction",
    "InvariantSeq",
    "power_traces",
    "newton_coeffs",
    "char_coeffs",
    "denominator_coeffs",
    "denominator_from_coeffs",
    "numerator_coeffs",
    "char_function",
    "dual_coeffs",
    "gamma_seq",
    "hankel_det",
    "ber_plus",
    "ber_minus",
    "resultant",
    "ber_plus_from_coeffs",
    "ber_minus_from_coeffs",
    "resultant_from_coeffs",
    "berezinian_via_traces",
    "berezinian_from_coeffs",
    "shifted_power_traces",
    "min_poly",
    "eval_matrix_poly",
    "c_recurrence_residuals",
    "dual_recurrence_residuals",
    "gamma_recurrence_residuals",
    "hankel_residuals",
    "invariant_seq",
    "default_window",
]

DENOMINATOR_HANKEL = "denominator Hankel body singular"
RESULTANT_SINGULAR = "resultant body singular"


def _get(seq: Sequence, k: int, zero):
    if k < 0:
        return zero
    return seq[k]


def _is_unit(x) -> bool:
    return not x.body_is_zero()


# -- sequences at zero --------------------------------------------------------

def power_traces(A: Supermatrix, m: int) -> list[GrassmannElement]:
    """``[s_1, ..., s_m]`` with ``s_k = str(A^k)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    out = []
    P = A
    for k in range(1, m + 1):
        if k > 1:
            P = P @ A
        out.append(P.supertrace())
    return out


def newton_coeffs(s: Sequence, m: int, one):
    """
    ``c_0..c_m`` from power sums ``s = [s_1, s_2, ...]`` via
    ``(k+1) c_{k+1} = sum_{j=0..k} (-1)^j s_{j+1} c_{k-j}``.
    """
    if len(s) < m:
        raise ValueError(f"need {m} power traces, got {len(s)}")
    c = [one]
    for k in range(m):
        acc = one - one
        for j in range(k + 1):
            term = s[j] * c[k - j]
            acc = acc - term if j % 2 else acc + term
        c.append(acc / (k + 1))
    return c


def char_coeffs(A: Supermatrix, m: int) -> list[GrassmannElement]:
    """Taylor coefficients ``c_0..c_m`` of ``Ber(1 + zA)``."""
    one = GrassmannElement.scalar(A.n, 1)
    if m == 0:
        return [one]
    return newton_coeffs(power_traces(A, m), m, one)


# -- characteristic function P/Q ---------------------------------------------

@dataclass(frozen=True)
class CharFunction:
    """``Ber(1 + zA) = (1 + a_1 z + ... + a_p z^p) / (1 + b_1 z + ... + b_q z^q)``."""

    a: tuple
    b: tuple

    def numerator(self, one) -> list:
        return [one, *self.a]

    def denominator(self, one) -> list:
        return [one, *self.b]


def denominator_from_coeffs(c: Sequence, p: int, q: int) -> list:
    """
    Solve ``c_{k+q} + b_1 c_{k+q-1} + ... + b_q c_k = 0`` at ``k = p-q+1..p``
    for ``b_1..b_q`` by Cramer's rule.  Needs ``c_0..c_{p+q}``.
    """
    if q == 0:
        return []
    if len(c) < p + q + 1:
        raise ValueError(f"need c_0..c_{p + q}")
    one = c[0]
    zero = one - one
    ks = range(p - q + 1, p + 1)
    system = [[_get(c, k + q - j, zero) for j in range(1, q + 1)] for k in ks]
    rhs = [-_get(c, k + q, zero) for k in ks]
    d = even_block_det(system, one)
    if not _is_unit(d):
        raise NonGeneric(DENOMINATOR_HANKEL, "recurrence system for Q has non-invertible determinant")
    d_inv = d.inverse()
    b = []
    for col in range(q):
        replaced = [row[:col] + [rhs[i]] + row[col + 1:] for i, row in enumerate(system)]
        b.append(even_block_det(replaced, one) * d_inv)
    return b


def denominator_coeffs(A: Supermatrix) -> list[GrassmannElement]:
    return denominator_from_coeffs(char_coeffs(A, A.p + A.q), A.p, A.q)


def numerator_coeffs(c: Sequence, b: Sequence, p: int) -> list:
    """
    ``a_k = sum_j b_j c_{k-j}`` for ``k = 1..p`` (``b_0 = 1``); the same
    convolution is checked to vanish for ``p < k < len(c)``.
    """
    q = len(b)
    one = c[0]
    zero = one - one
    bb = [one, *b]

    def conv(k):
        acc = zero
        for j in range(min(k, q) + 1):
            acc = acc + bb[j] * _get(c, k - j, zero)
        return acc

    if len(c) < p + q + 1:
        raise ValueError(f"need c_0..c_{p + q}")
    a = [conv(k) for k in range(1, p + 1)]
    for k in range(p + 1, len(c)):
        if not conv(k).is_zero():
            raise NonGeneric("numerator degree exceeds p", f"coefficient of z^{k} is nonzero")
    return a


def char_function(A: Supermatrix) -> CharFunction:
    c = char_coeffs(A, A.p + A.q)
    b = denominator_from_coeffs(c, A.p, A.q)
    return CharFunction(tuple(numerator_coeffs(c, b, A.p)), tuple(b))


# -- expansion at infinity and the gamma sequence -----------------------------

def dual_coeffs(A: Supermatrix, depth: int, ber=None) -> dict[int, GrassmannElement]:
    """``{k: c*_k}`` for ``k = p-q, p-q-1, ..., p-q-depth``, ``c*_k = Ber A * c_{p-q-k}(A^-1)``."""
    if ber is None:
        ber = berezinian_classical(A)
    try:
        a_inv = inverse(A)
    except NotInvertible:
        raise NotInvertible("body of A singular") from None
    cinv = char_coeffs(a_inv, depth)
    top = A.p - A.q
    return {top - j: ber * cinv[j] for j in range(depth + 1)}


def default_window(p: int, q: int) -> tuple[int, int]:
    return (-q - 2, p + 2 * q)


def _gamma_from(c: Sequence, cstar: Mapping[int, object], p: int, q: int, lo: int, hi: int, zero):
    top = p - q
    out = {}
    for k in range(lo, hi + 1):
        if k >= len(c):
            raise ValueError(f"c_{k} not available")
        ck = _get(c, k, zero)
        if k > top:
            cs = zero
        elif k in cstar:
            cs = cstar[k]
        else:
            raise ValueError(f"c*_{k} not available")
        out[k] = ck - cs
    return out


def gamma_seq(A: Supermatrix, window: tuple[int, int] | None = None) -> dict[int, GrassmannElement]:
    """``{k: gamma_k}`` with ``gamma_k = c_k - c*_k`` over the inclusive window."""
    lo, hi = window if window is not None else default_window(A.p, A.q)
    top = A.p - A.q
    c = char_coeffs(A, max(hi, 0))
    cstar = dual_coeffs(A, top - lo) if lo <= top else {}
    return _gamma_from(c, cstar, A.p, A.q, lo, hi, GrassmannElement.scalar(A.n, 0))


def hankel_det(seq, k: int, size: int, one=None):
    """Determinant of the ``size x size`` Hankel matrix ``[seq(k + i + j)]``."""
    get = seq if callable(seq) else seq.__getitem__
    try:
        rows = [[get(k + i + j) for j in range(size)] for i in range(size)]
    except (KeyError, IndexError):
        raise ValueError(f"window does not cover indices {k}..{k + 2 * size - 2}") from None
    return even_block_det(rows, one)


# -- Berezinian from traces, Ber+-, resultant --------------------------------

def _c_getter(c: Sequence):
    zero = c[0] - c[0]

    def get(k):
        if k < 0:
            return zero
        return c[k]

    return get


def ber_plus_from_coeffs(c: Sequence, p: int, q: int):
    """``det[c_{p-q+i+j}]_{i,j=0..q}``."""
    return hankel_det(_c_getter(c), p - q, q + 1, c[0])


def ber_minus_from_coeffs(c: Sequence, p: int, q: int):
    """``det[c_{p-q+2+i+j}]_{i,j=0..q-1}``; 1 when ``q = 0``."""
    return hankel_det(_c_getter(c), p - q + 2, q, c[0])


def resultant_from_coeffs(c: Sequence, p: int, q: int):
    """``det[c_{p-q+1+i+j}]_{i,j=0..q-1}``; 1 when ``q = 0``."""
    return hankel_det(_c_getter(c), p - q + 1, q, c[0])


def berezinian_from_coeffs(c: Sequence, p: int, q: int):
    num = ber_plus_from_coeffs(c, p, q)
    den = ber_minus_from_coeffs(c, p, q)
    if den.body_is_zero():
        raise NonGeneric(DENOMINATOR_HANKEL, f"det[c_{p - q + 2}..c_{p + q}] (Ber-) has zero body")
    return num * den.inverse()


def berezinian_via_traces(A: Supermatrix) -> GrassmannElement:
    """Ber A as the ratio of two Hankel determinants of ``c_0..c_{p+q}``."""
    return berezinian_from_coeffs(char_coeffs(A, A.p + A.q), A.p, A.q)


def ber_plus(A: Supermatrix) -> GrassmannElement:
    return ber_plus_from_coeffs(char_coeffs(A, A.p + A.q), A.p, A.q)


def ber_minus(A: Supermatrix) -> GrassmannElement:
    return ber_minus_from_coeffs(char_coeffs(A, A.p + A.q), A.p, A.q)


def resultant(A: Supermatrix) -> GrassmannElement:
    return resultant_from_coeffs(char_coeffs(A, A.p + A.q), A.p, A.q)


# -- super Cayley-Hamilton ----------------------------------------------------

def shifted_power_traces(s: Sequence[GrassmannElement], p: int, q: int, n: int, m: int) -> list[EvenPoly]:
    """
    ``str((A - z)^k)`` for ``k = 1..m`` as polynomials in ``z``, by the binomial
    expansion in ``z * 1`` (central) with ``s_0 = p - q``.
    """
    s_full = [GrassmannElement.scalar(n, p - q), *s]
    out = []
    for k in range(1, m + 1):
        coeffs = [s_full[k - i] * (comb(k, i) * (-1) ** i) for i in range(k + 1)]
        out.append(EvenPoly(n, coeffs))
    return out


def min_poly(A: Supermatrix, c: Sequence | None = None) -> EvenPoly:
    """``Ber+(A - z) Ber-(A - z) / R`` with the whole trace pipeline run over ``EvenPoly``."""
    p, q, n = A.p, A.q, A.n
    m = p + q
    if c is None:
        c = char_coeffs(A, m)
    r = resultant_from_coeffs(c, p, q)
    if r.body_is_zero():
        raise NonGeneric(RESULTANT_SINGULAR, "R has zero body")
    s = power_traces(A, m)
    one = EvenPoly(n, (1,))
    cz = newton_coeffs(shifted_power_traces(s, p, q, n, m), m, one)
    plus = ber_plus_from_coeffs(cz, p, q)
    minus = ber_minus_from_coeffs(cz, p, q)
    return plus * minus * r.inverse()


def eval_matrix_poly(P: EvenPoly, A: Supermatrix) -> Supermatrix:
    """Horner evaluation of ``P`` at the matrix ``A`` (even coefficients are central)."""
    if P.n != A.n:
        raise ValueError(f"generator count mismatch: {P.n} vs {A.n}")
    eye = Supermatrix.identity(A.p, A.q, A.n)
    acc = Supermatrix.zeros(A.p, A.q, A.n)
    for coeff in reversed(P.coeffs):
        acc = acc @ A + eye.scale(coeff)
    return acc


# -- recurrence residuals -----------------------------------------------------

def _recurrence(get: Callable[[int], object], b: Sequence, k: int):
    acc = get(k)
    for j, bj in enumerate(b, start=1):
        acc = acc + bj * get(k - j)
    return acc


def c_recurrence_residuals(c: Sequence, b: Sequence, p: int, q: int) -> dict[int, object]:
    """``c_{k+q} + sum b_j c_{k+q-j}`` for ``p-q < k <= len(c)-1-q``."""
    get = _c_getter(c)
    return {k: _recurrence(get, b, k + q) for k in range(p - q + 1, len(c) - q)}


def dual_recurrence_residuals(cstar: Mapping[int, object], b: Sequence, p: int, q: int, lo: int) -> dict[int, object]:
    """``c*_k + sum b_j c*_{k-j}`` for ``lo <= k < 0``."""
    top = p - q
    zero = next(iter(cstar.values())) * 0

    def get(k):
        return zero if k > top else cstar[k]

    return {k: _recurrence(get, b, k) for k in range(lo, 0)}


def gamma_recurrence_residuals(gamma: Mapping[int, object], b: Sequence, lo: int, hi: int) -> dict[int, object]:
    return {k: _recurrence(gamma.__getitem__, b, k) for k in range(lo, hi + 1)}


def hankel_residuals(gamma: Mapping[int, object], q: int, lo: int, hi: int) -> dict[int, object]:
    return {k: hankel_det(gamma, k, q + 1) for k in range(lo, hi + 1)}


# -- bundle -------------------------------------------------------------------

@dataclass
class InvariantSeq:
    """The sequences ``s``, ``c``, ``c*``, ``gamma`` of one matrix over stated ranges."""

    p: int
    q: int
    s: list
    c: list
    c_star: dict = field(default_factory=dict)
    gamma: dict = field(default_factory=dict)
    window: tuple[int, int] | None = None


def invariant_seq(A: Supermatrix, m: int | None = None, window: tuple[int, int] | None = None,
                  ber=None) -> InvariantSeq:
    """
    Compute ``s_1..s_m``, ``c_0..c_m`` and, when ``A`` is invertible,
    ``c*`` and ``gamma`` over ``window`` (default ``[-q-2, p+2q]``).

    ``m`` is raised automatically to cover the window.  If ``A`` (or
    ``A11``) is singular, ``c_star``/``gamma`` stay empty.
    """
    p, q = A.p, A.q
    lo, hi = window if window is not None else default_window(p, q)
    m = max(m or 0, hi, p + q, 1)
    s = power_traces(A, m)
    c = newton_coeffs(s, m, GrassmannElement.scalar(A.n, 1))
    seq = InvariantSeq(p, q, s, c, window=(lo, hi))
    top = p - q
    cstar = {}
    if lo <= top:
        if ber is None:
            ber = berezinian_classical(A)
        cstar = dual_coeffs(A, top - lo, ber)
    seq.c_star = cstar
    seq.gamma = _gamma_from(c, cstar, p, q, lo, hi, c[0] * 0)
    return seq
