"""
Even supermatrices on a ``p|q`` superspace.

Rows and columns ``0..p-1`` are the even directions, ``p..p+q-1`` the odd ones.
The diagonal blocks ``A00``, ``A11`` hold even Grassmann entries and the
off-diagonal blocks ``A01``, ``A10`` hold odd entries; zero is admissible in
every block.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Sequence

from .errors import BerezError, DomainError, InputError, NotInvertible, ParityError
from .grassmann import GrassmannElement, element_from_terms, element_to_terms

__all__ = [
    "Supermatrix",
    "supertrace",
    "matmul",
    "matpow",
    "inverse",
    "even_block_det",
    "berezinian_classical",
    "exp_soul",
    "permutation_sign",
]


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _mat_mul(X, Y, zero):
    inner = len(Y)
    cols = len(Y[0]) if Y else 0
    out = []
    for row in X:
        new_row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                a = row[k]
                if a:
                    b = Y[k][j]
                    if b:
                        acc = acc + a * b
            new_row.append(acc)
        out.append(new_row)
    return out


def _rational_inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise NotInvertible("body matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = 1 / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class Supermatrix:
    """Immutable even supermatrix with Grassmann entries on ``n`` generators."""

    __slots__ = ("p", "q", "n", "entries")

    def __init__(self, p: int, q: int, entries, n: int | None = None):
        if p < 0 or q < 0 or p + q < 1:
            raise ValueError(f"invalid dimensions {p}|{q}")
        size = p + q
        rows = [list(r) for r in entries]
        if len(rows) != size or any(len(r) != size for r in rows):
            raise ValueError(f"a {p}|{q} supermatrix needs {size}x{size} entries")
        if n is None:
            ns = {x.n for r in rows for x in r if isinstance(x, GrassmannElement)}
            if len(ns) > 1:
                raise ValueError(f"entries use different generator counts {sorted(ns)}")
            n = ns.pop() if ns else 0
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if not isinstance(x, GrassmannElement):
                    x = r[j] = GrassmannElement.scalar(n, x)
                elif x.n != n:
                    raise ValueError(f"entry ({i}, {j}) has {x.n} generators, expected {n}")
                diagonal_block = (i < p) == (j < p)
                ok = x.is_even() if diagonal_block else x.is_odd()
                if not ok:
                    want = "even" if diagonal_block else "odd"
                    raise ParityError(f"entry ({i}, {j}) must be {want}, got {x.parity.name.lower()}: {x!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))

    @classmethod
    def _raw(cls, p, q, n, rows):
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "q", q)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "entries", tuple(tuple(r) for r in rows))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Supermatrix is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, p: int, q: int, n: int = 0) -> "Supermatrix":
        return cls.diagonal([1] * (p + q), p, q, n)

    @classmethod
    def zeros(cls, p: int, q: int, n: int = 0) -> "Supermatrix":
        return cls.diagonal([0] * (p + q), p, q, n)

    @classmethod
    def diagonal(cls, values, p: int, q: int, n: int = 0) -> "Supermatrix":
        size = p + q
        if len(values) != size:
            raise ValueError(f"need {size} diagonal values")
        zero = GrassmannElement.scalar(n, 0)
        rows = [[zero] * size for _ in range(size)]
        for i, v in enumerate(values):
            rows[i][i] = v if isinstance(v, GrassmannElement) else GrassmannElement.scalar(n, v)
        return cls(p, q, rows, n)

    @classmethod
    def from_blocks(cls, a00, a01, a10, a11, n: int | None = None) -> "Supermatrix":
        p, q = len(a00), len(a11)
        a01 = a01 if a01 else [[] for _ in range(p)]
        a10 = a10 if a10 else [[] for _ in range(q)]
        rows = [list(a00[i]) + list(a01[i]) for i in range(p)]
        rows += [list(a10[i]) + list(a11[i]) for i in range(q)]
        return cls(p, q, rows, n)

    # -- structure ----------------------------------------------------------

    @property
    def size(self) -> int:
        return self.p + self.q

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def block(self, r: int, c: int) -> list[list[GrassmannElement]]:
        rows = range(0, self.p) if r == 0 else range(self.p, self.size)
        cols = range(0, self.p) if c == 0 else range(self.p, self.size)
        return [[self.entries[i][j] for j in cols] for i in rows]

    @property
    def blocks(self):
        return self.block(0, 0), self.block(0, 1), self.block(1, 0), self.block(1, 1)

    def body_matrix(self) -> list[list[Fraction]]:
        return [[x.body for x in row] for row in self.entries]

    def is_soul_valued(self) -> bool:
        return all(x.body_is_zero() for row in self.entries for x in row)

    def _zero(self):
        return GrassmannElement.scalar(self.n, 0)

    def _check_compatible(self, other: "Supermatrix"):
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError(f"dimension mismatch: {self.p}|{self.q} vs {other.p}|{other.q}")
        if self.n != other.n:
            raise ValueError(f"generator count mismatch: {self.n} vs {other.n}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Supermatrix") -> "Supermatrix":
        self._check_compatible(other)
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        return Supermatrix._raw(self.p, self.q, self.n, rows)

    def __neg__(self) -> "Supermatrix":
        return Supermatrix._raw(self.p, self.q, self.n, [[-a for a in r] for r in self.entries])

    def __sub__(self, other: "Supermatrix") -> "Supermatrix":
        return self + (-other)

    def scale(self, c) -> "Supermatrix":
        """Multiply by a rational or an even (hence central) Grassmann scalar."""
        if isinstance(c, GrassmannElement):
            if not c.is_even():
                raise ParityError("supermatrices are scaled by even scalars only")
            if c.n != self.n:
                raise ValueError(f"generator count mismatch: {self.n} vs {c.n}")
        elif not isinstance(c, (int, Rational)):
            raise TypeError(f"cannot scale by {type(c).__name__}")
        return Supermatrix._raw(self.p, self.q, self.n, [[c * a for a in r] for r in self.entries])

    def __mul__(self, c):
        if isinstance(c, Supermatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Supermatrix") -> "Supermatrix":
        return matmul(self, other)

    def __pow__(self, k: int) -> "Supermatrix":
        return matpow(self, k)

    def __eq__(self, other):
        if not isinstance(other, Supermatrix):
            return NotImplemented
        return (self.p, self.q, self.n, self.entries) == (other.p, other.q, other.n, other.entries)

    def __hash__(self):
        return hash((self.p, self.q, self.n, self.entries))

    def __repr__(self):
        rows = ",\n  ".join("[" + ", ".join(repr(x) for x in r) + "]" for r in self.entries)
        return f"Supermatrix({self.p}|{self.q}, n={self.n},\n  {rows})"

    def supertrace(self) -> GrassmannElement:
        return supertrace(self)

    def inverse(self) -> "Supermatrix":
        return inverse(self)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "generators": self.n,
            "p": self.p,
            "q": self.q,
            "entries": [[element_to_terms(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, doc) -> "Supermatrix":
        if not isinstance(doc, dict):
            raise InputError("supermatrix document must be a JSON object")
        missing = {"generators", "p", "q", "entries"} - set(doc)
        if missing:
            raise InputError(f"supermatrix document lacks keys {sorted(missing)}")
        n, p, q = doc["generators"], doc["p"], doc["q"]
        for name, v in (("generators", n), ("p", p), ("q", q)):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"'{name}' must be a non-negative integer")
        if p + q < 1:
            raise InputError("p + q must be at least 1")
        size = p + q
        raw = doc["entries"]
        if not isinstance(raw, list) or len(raw) != size or any(not isinstance(r, list) or len(r) != size for r in raw):
            raise InputError(f"'entries' must be a {size}x{size} array of term lists")
        rows = []
        for i, r in enumerate(raw):
            row = []
            for j, t in enumerate(r):
                try:
                    row.append(element_from_terms(t, n))
                except InputError as e:
                    raise InputError(f"entry ({i}, {j}): {e}") from None
            rows.append(row)
        try:
            return cls(p, q, rows, n)
        except (ParityError, ValueError) as e:
            raise InputError(str(e)) from None


def supertrace(A: Supermatrix) -> GrassmannElement:
    acc = A._zero()
    for i in range(A.size):
        acc = acc + A.entries[i][i] if i < A.p else acc - A.entries[i][i]
    return acc


def matmul(A: Supermatrix, B: Supermatrix) -> Supermatrix:
    A._check_compatible(B)
    rows = _mat_mul(A.entries, B.entries, A._zero())
    return Supermatrix._raw(A.p, A.q, A.n, rows)


def matpow(A: Supermatrix, k: int) -> Supermatrix:
    if k < 0:
        return matpow(inverse(A), -k)
    result = Supermatrix.identity(A.p, A.q, A.n)
    base = A
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def inverse(A: Supermatrix) -> Supermatrix:
    """Exact inverse via the body inverse and a terminating Neumann series."""
    binv = _rational_inverse(A.body_matrix())
    n = A.n
    binv_el = [[GrassmannElement.scalar(n, v) for v in r] for r in binv]
    soul = [[x.soul for x in r] for r in A.entries]
    # A = B (1 + B^-1 S), B^-1 S nilpotent of order <= n + 1
    x = [[-v for v in r] for r in _mat_mul(binv_el, soul, A._zero())]
    size = A.size
    total = [[GrassmannElement.scalar(n, int(i == j)) for j in range(size)] for i in range(size)]
    term = total
    for _ in range(n):
        term = _mat_mul(term, x, A._zero())
        if all(v.is_zero() for r in term for v in r):
            break
        total = [[a + b for a, b in zip(r, s)] for r, s in zip(total, term)]
    result = Supermatrix._raw(A.p, A.q, n, _mat_mul(total, binv_el, A._zero()))
    if matmul(A, result) != Supermatrix.identity(A.p, A.q, n):
        raise BerezError("inverse post-check failed")
    return result


def _ring_one(x):
    return x.one() if hasattr(x, "one") else Fraction(1)


def even_block_det(M, one=None):
    """
    Leibniz determinant of a square array with commuting entries.

    Entries may be even Grassmann elements, :class:`EvenPoly` values or
    rationals.  ``one`` supplies the unit for the empty (0x0) matrix.
    """
    M = [list(r) for r in M]
    size = len(M)
    if any(len(r) != size for r in M):
        raise ValueError("determinant of a non-square array")
    for i, r in enumerate(M):
        for j, x in enumerate(r):
            if isinstance(x, GrassmannElement) and not x.is_even():
                raise ParityError(f"entry ({i}, {j}) is not even; entries must commute")
    if size == 0:
        return one if one is not None else Fraction(1)
    unit = _ring_one(M[0][0])
    total = unit - unit
    for perm in itertools.permutations(range(size)):
        prod = unit
        for i, j in enumerate(perm):
            prod = prod * M[i][j]
            if not prod:
                break
        else:
            total = total + prod if permutation_sign(perm) > 0 else total - prod
    return total


def berezinian_classical(A: Supermatrix) -> GrassmannElement:
    """Berezin's block formula ``det(A00 - A01 A11^-1 A10) / det A11``."""
    a00, a01, a10, a11 = A.blocks
    one = GrassmannElement.scalar(A.n, 1)
    if A.q == 0:
        return even_block_det(a00, one)
    try:
        a11_inv = inverse(Supermatrix(A.q, 0, a11, A.n)).entries
    except NotInvertible:
        raise NotInvertible("A11 body singular") from None
    zero = A._zero()
    correction = _mat_mul(_mat_mul(a01, a11_inv, zero), a10, zero) if A.p else []
    schur = [[a - b for a, b in zip(r, s)] for r, s in zip(a00, correction)]
    return even_block_det(schur, one) * even_block_det(a11, one).inverse()


def exp_soul(D: Supermatrix) -> Supermatrix:
    """``sum D^k / k!`` for a soul-valued ``D`` (which is nilpotent)."""
    if not D.is_soul_valued():
        raise DomainError("exp_soul needs every entry to have zero body")
    total = Supermatrix.identity(D.p, D.q, D.n)
    term = total
    for k in range(1, D.n + 1):
        term = term @ D
        if term.is_zero():
            break
        total = total + term.scale(Fraction(1, factorial(k)))
    return total
