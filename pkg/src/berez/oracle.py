"""
Independent ground truth for the trace pipeline.

* :func:`eigen_char_series` expands ``prod (1 + l z) / prod (1 + m z)`` directly.
* :func:`diag_supermatrix` / :func:`conjugated` build matrices with a known spectrum.
* :func:`exterior_power_trace` builds the super exterior power of ``A`` by brute
  force and takes its supertrace.
* :func:`random_even_supermatrix` and friends draw seeded test matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb, prod
from typing import Sequence

from .grassmann import GrassmannElement
from .supermatrix import Supermatrix

__all__ = [
    "EigenData",
    "ExtBasisVector",
    "eigen_char_series",
    "diag_supermatrix",
    "conjugated",
    "exterior_basis",
    "exterior_basis_size",
    "exterior_power_trace",
    "random_element",
    "random_even_supermatrix",
    "random_soul_supermatrix",
    "random_eigen_data",
    "MAX_BASIS",
]

MAX_BASIS = 10_000


@dataclass(frozen=True)
class EigenData:
    lambdas: tuple[Fraction, ...]
    mus: tuple[Fraction, ...]

    def __init__(self, lambdas: Sequence, mus: Sequence):
        object.__setattr__(self, "lambdas", tuple(Fraction(x) for x in lambdas))
        object.__setattr__(self, "mus", tuple(Fraction(x) for x in mus))

    @property
    def p(self) -> int:
        return len(self.lambdas)

    @property
    def q(self) -> int:
        return len(self.mus)

    def berezinian(self) -> Fraction:
        return prod(self.lambdas, start=Fraction(1)) / prod(self.mus, start=Fraction(1))

    def cross_product(self) -> Fraction:
        """``prod_{i, a} (lambda_i - mu_a)``."""
        return prod((l - m for l in self.lambdas for m in self.mus), start=Fraction(1))


def eigen_char_series(e: EigenData, m: int) -> list[Fraction]:
    """First ``m + 1`` Taylor coefficients of ``prod (1 + l z) / prod (1 + mu z)``."""
    series = [Fraction(1)] + [Fraction(0)] * m
    for lam in e.lambdas:
        for k in range(m, 0, -1):
            series[k] += lam * series[k - 1]
    for mu in e.mus:
        # divide by (1 + mu z): new_k = old_k - mu new_{k-1}
        for k in range(1, m + 1):
            series[k] -= mu * series[k - 1]
    return series


def diag_supermatrix(e: EigenData, n: int = 0) -> Supermatrix:
    return Supermatrix.diagonal([*e.lambdas, *e.mus], e.p, e.q, n)


def conjugated(e: EigenData | Supermatrix, T: Supermatrix) -> Supermatrix:
    """``T D T^-1`` where ``D`` is ``diag(e)`` (or ``e`` itself if already a matrix)."""
    D = e if isinstance(e, Supermatrix) else diag_supermatrix(e, T.n)
    return T @ D @ T.inverse()


# -- super exterior powers ----------------------------------------------------

@dataclass(frozen=True)
class ExtBasisVector:
    """``e_{j1} ^ ... ^ e_{jr} ^ f_{b1} ^ ... ^ f_{bs}``, 1-based indices."""

    even_part: tuple[int, ...]
    odd_part: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.even_part) + len(self.odd_part)

    @property
    def parity(self) -> int:
        return len(self.odd_part) % 2


def exterior_basis(p: int, q: int, k: int) -> list[ExtBasisVector]:
    """Basis of the ``k``-th exterior power of a ``p|q`` space (odd factors symmetric)."""
    out = []
    for r in range(min(p, k) + 1):
        for ev in combinations(range(1, p + 1), r):
            for od in combinations_with_replacement(range(1, q + 1), k - r):
                out.append(ExtBasisVector(ev, od))
    return out


def exterior_basis_size(p: int, q: int, k: int) -> int:
    if q == 0:
        return comb(p, k)
    return sum(comb(p, r) * comb(q + k - r - 1, k - r) for r in range(min(p, k) + 1))


def _insert_sorted(key: tuple[int, ...], i: int, p: int):
    """
    Wedge basis index ``i`` onto the right of sorted ``key``; returns
    ``(new_key, sign)`` or ``None`` if the product vanishes.
    """
    odd_i = i >= p
    if not odd_i and i in key:
        return None
    sign = 1
    pos = len(key)
    while pos > 0 and key[pos - 1] > i:
        # swapping adjacent factors u, v costs -(-1)^{|u||v|}
        if not (odd_i and key[pos - 1] >= p):
            sign = -sign
        pos -= 1
    return key[:pos] + (i,) + key[pos:], sign


def exterior_power_trace(A: Supermatrix, k: int, max_basis: int = MAX_BASIS) -> GrassmannElement:
    """
    Supertrace of the operator induced by ``A`` on the ``k``-th exterior power.

    Vectors carry coefficients on the right and ``A b_j = sum_i b_i A_ij``.
    Moving a coefficient of parity ``c`` past a factor of parity ``v`` costs
    ``(-1)^{cv}``; factors themselves obey ``u ^ v = -(-1)^{|u||v|} v ^ u``.
    """
    size = exterior_basis_size(A.p, A.q, k)
    if size > max_basis:
        raise ValueError(f"exterior power basis has {size} elements (limit {max_basis})")
    p, n = A.p, A.n
    one = GrassmannElement.scalar(n, 1)
    total = GrassmannElement.scalar(n, 0)
    for vec in exterior_basis(A.p, A.q, k):
        cols = [j - 1 for j in vec.even_part] + [p + b - 1 for b in vec.odd_part]
        # partial products: sorted index tuple -> right coefficient
        state: dict[tuple[int, ...], GrassmannElement] = {(): one}
        odd_cols = 0
        for j in cols:
            new_state: dict[tuple[int, ...], GrassmannElement] = {}
            for key, coeff in state.items():
                coeff_par = (sum(1 for x in key if x >= p) + odd_cols) & 1
                for i in range(A.size):
                    a = A.entries[i][j]
                    if not a:
                        continue
                    ins = _insert_sorted(key, i, p)
                    if ins is None:
                        continue
                    new_key, sign = ins
                    if coeff_par and i >= p:
                        sign = -sign
                    term = coeff * a
                    if sign < 0:
                        term = -term
                    prev = new_state.get(new_key)
                    new_state[new_key] = term if prev is None else prev + term
            state = new_state
            if j >= p:
                odd_cols += 1
        diag = state.get(tuple(cols))
        if diag is not None:
            total = total - diag if vec.parity else total + diag
    return total


# -- random factories ---------------------------------------------------------

def random_element(rng: random.Random, n: int, parity: int, body_range: int = 9,
                   soul_probability: float = 0.85) -> GrassmannElement:
    """
    A small-integer body (even elements only) plus at most one soul monomial
    of the requested parity with a small rational coefficient.
    """
    terms = {}
    if parity == 0:
        terms[0] = rng.randint(-body_range, body_range)
    masks = [m for m in range(1, 1 << n) if m.bit_count() % 2 == parity]
    if masks and rng.random() < soul_probability:
        coeff = Fraction(rng.choice([i for i in range(-5, 6) if i]), rng.randint(1, 4))
        terms[rng.choice(masks)] = coeff
    return GrassmannElement(n, terms)


def random_even_supermatrix(rng: random.Random, p: int, q: int, n: int, body_range: int = 9,
                            soul_probability: float = 0.85) -> Supermatrix:
    size = p + q
    rows = [[random_element(rng, n, int((i < p) != (j < p)), body_range, soul_probability)
             for j in range(size)] for i in range(size)]
    return Supermatrix(p, q, rows, n)


def random_soul_supermatrix(rng: random.Random, p: int, q: int, n: int) -> Supermatrix:
    """Even supermatrix whose entries all have zero body."""
    size = p + q
    rows = [[random_element(rng, n, int((i < p) != (j < p)), body_range=0) for j in range(size)]
            for i in range(size)]
    return Supermatrix(p, q, rows, n)


def random_eigen_data(rng: random.Random, p: int, q: int, value_range: int = 9) -> EigenData:
    """Distinct nonzero rational eigenvalues."""
    pool = [v for v in range(-value_range, value_range + 1) if v]
    values = rng.sample(pool, p + q)
    return EigenData(values[:p], values[p:])
