"""
Exact scalars: the Grassmann algebra on N generators and polynomials in z
over its even part.

A :class:`GrassmannElement` is a sparse map from generator subsets (stored as
bitmasks, bit ``i-1`` standing for generator ``g_i``) to :class:`~fractions.Fraction`
coefficients.  Products carry the Koszul sign obtained by counting the
inversions needed to sort the concatenated index lists.

:class:`EvenPoly` is a dense univariate polynomial whose coefficients are even
Grassmann elements.  Both the even subalgebra and ``EvenPoly`` satisfy the
small commutative-ring contract the higher modules are written against:

    ``+``, ``-``, unary ``-``, ``*``, ``/ int`` (exact), ``inverse()``,
    ``is_zero()``, ``body_is_zero()``, ``one()``, ``zero()``
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import InputError, NotInvertible, ParityError, DomainError

__all__ = [
    "MAX_GENERATORS",
    "Parity",
    "GrassmannElement",
    "EvenPoly",
    "grassmann_mul",
    "grassmann_inv",
    "grassmann_exp",
    "eval_poly",
    "element_to_terms",
    "element_from_terms",
]

#: Hard cap on the number of generators; keeps bitmask keys in machine words.
MAX_GENERATORS = 16


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1
    MIXED = 2


def _merge_sign(a: int, b: int) -> int:
    """Sign of the permutation sorting ``a``'s indices followed by ``b``'s (disjoint)."""
    inversions = 0
    while b:
        low = b & -b
        inversions += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if inversions & 1 else 1


def _monomial_indices(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _monomial_sort_key(mask: int):
    return (mask.bit_count(), _monomial_indices(mask))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class GrassmannElement:
    """Immutable element of the Grassmann algebra on ``n`` generators."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        if not 0 <= n <= MAX_GENERATORS:
            raise ValueError(f"generator count {n} outside 0..{MAX_GENERATORS}")
        clean = {}
        if terms:
            limit = 1 << n
            for mask, coeff in terms.items():
                if not 0 <= mask < limit:
                    raise ValueError(f"monomial {mask:#b} does not fit in {n} generators")
                c = _as_fraction(coeff)
                if c:
                    clean[mask] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "GrassmannElement":
        # trusted constructor: terms already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GrassmannElement is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def scalar(cls, n: int, value=0) -> "GrassmannElement":
        return cls(n, {0: value})

    @classmethod
    def generator(cls, n: int, i: int) -> "GrassmannElement":
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        return cls._raw(n, {1 << (i - 1): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int], coeff=1) -> "GrassmannElement":
        """``coeff * g_{i1} g_{i2} ...`` in the given order (sign applied if unsorted)."""
        result = cls.scalar(n, coeff)
        for i in indices:
            result = result * cls.generator(n, i)
        return result

    def one(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {0: Fraction(1)})

    def zero(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {})

    # -- structure ----------------------------------------------------------

    @property
    def parity(self) -> Parity:
        """EVEN for the zero element; MIXED if both parities occur."""
        seen = {m.bit_count() & 1 for m in self.terms}
        if seen == {1}:
            return Parity.ODD
        if len(seen) == 2:
            return Parity.MIXED
        return Parity.EVEN

    def is_even(self) -> bool:
        return all(m.bit_count() % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(m.bit_count() % 2 == 1 for m in self.terms)

    @property
    def body(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    @property
    def soul(self) -> "GrassmannElement":
        return GrassmannElement._raw(self.n, {m: c for m, c in self.terms.items() if m})

    def is_zero(self) -> bool:
        return not self.terms

    def body_is_zero(self) -> bool:
        return 0 not in self.terms

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.n != self.n:
                raise ValueError(f"generator count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Rational)):
            return GrassmannElement.scalar(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return GrassmannElement._raw(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            if not c:
                return self.zero()
            return GrassmannElement._raw(self.n, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                v = ca * cb
                if _merge_sign(ma, mb) < 0:
                    v = -v
                key = ma | mb
                out[key] = out.get(key, 0) + v
        return GrassmannElement._raw(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        # scalars from the left commute with everything
        if isinstance(other, (int, Rational)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return self * (1 / c)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "GrassmannElement":
        """Exact inverse of an even element with nonzero body."""
        if not self.is_even():
            raise ParityError(f"only even elements are inverted here (parity {self.parity.name})")
        b = self.body
        if not b:
            raise NotInvertible("element has zero body")
        # x = b(1 + t) with t = soul/b nilpotent of order <= n+1
        t = self.soul * (1 / b)
        term = self.one()
        total = self.one()
        for _ in range(self.n):
            term = -(term * t)
            if term.is_zero():
                break
            total = total + term
        return total * (1 / b)

    def exp(self) -> "GrassmannElement":
        """``exp`` of a soul-valued even element; a terminating series."""
        if not self.body_is_zero():
            raise DomainError("exp is only exact for elements with zero body")
        term = self.one()
        total = self.one()
        for k in range(1, self.n + 1):
            term = term * self / k
            if term.is_zero():
                break
            total = total + term
        return total

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            return self.terms == ({0: c} if c else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_monomial_sort_key):
            c = self.terms[m]
            mono = "".join(f"g{i}" for i in _monomial_indices(m))
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


def grassmann_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    if x.n != y.n:
        raise ValueError(f"generator count mismatch: {x.n} vs {y.n}")
    return x * y


def grassmann_inv(x: GrassmannElement) -> GrassmannElement:
    return x.inverse()


def grassmann_exp(x: GrassmannElement) -> GrassmannElement:
    return x.exp()


class EvenPoly:
    """Polynomial in ``z`` with even Grassmann coefficients; ``coeffs[i]`` multiplies ``z**i``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence = ()):
        cs = []
        for c in coeffs:
            if not isinstance(c, GrassmannElement):
                c = GrassmannElement.scalar(n, c)
            elif c.n != n:
                raise ValueError(f"generator count mismatch: {n} vs {c.n}")
            if not c.is_even():
                raise ParityError(f"EvenPoly coefficient {c!r} is not even")
            cs.append(c)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _raw(cls, n, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "coeffs", tuple(cs))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("EvenPoly is immutable")

    @classmethod
    def z(cls, n: int) -> "EvenPoly":
        return cls._raw(n, (GrassmannElement.scalar(n, 0), GrassmannElement.scalar(n, 1)))

    @classmethod
    def constant(cls, c: GrassmannElement | int | Fraction, n: int | None = None) -> "EvenPoly":
        if isinstance(c, GrassmannElement):
            return cls(c.n, (c,))
        return cls(n, (c,))

    def one(self) -> "EvenPoly":
        return EvenPoly._raw(self.n, (GrassmannElement.scalar(self.n, 1),))

    def zero(self) -> "EvenPoly":
        return EvenPoly._raw(self.n, ())

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for zero."""
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> GrassmannElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return GrassmannElement.scalar(self.n, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def body_is_zero(self) -> bool:
        # only nonzero constants with invertible body are units here
        return self.degree != 0 or self.coeffs[0].body_is_zero()

    def _coerce(self, other) -> "EvenPoly":
        if isinstance(other, EvenPoly):
            if other.n != self.n:
                raise ValueError(f"generator count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Rational, GrassmannElement)):
            return EvenPoly(self.n, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = max(len(self.coeffs), len(other.coeffs))
        return EvenPoly._raw(self.n, [self[i] + other[i] for i in range(m)])

    __radd__ = __add__

    def __neg__(self):
        return EvenPoly._raw(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, GrassmannElement)):
            if isinstance(other, GrassmannElement) and not other.is_even():
                raise ParityError("EvenPoly can only be scaled by even elements")
            return EvenPoly._raw(self.n, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return self.zero()
        out = [GrassmannElement.scalar(self.n, 0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return EvenPoly._raw(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return EvenPoly._raw(self.n, [c / other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def inverse(self) -> "EvenPoly":
        if self.body_is_zero():
            raise NotInvertible("polynomial is not a unit (non-constant or zero body)")
        return EvenPoly._raw(self.n, (self.coeffs[0].inverse(),))

    def __call__(self, at):
        return eval_poly(self, at)

    def __eq__(self, other):
        if isinstance(other, EvenPoly):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational, GrassmannElement)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "EvenPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            zp = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            parts.append(f"({c!r}){zp}" if zp else f"({c!r})")
        return "EvenPoly(" + " + ".join(parts) + ")"


def eval_poly(p: EvenPoly, at) -> GrassmannElement:
    """Horner evaluation of ``p`` at an even Grassmann element (or rational)."""
    if not isinstance(at, GrassmannElement):
        at = GrassmannElement.scalar(p.n, at)
    if not at.is_even():
        raise ParityError("polynomials are evaluated at even elements only")
    if at.n != p.n:
        raise ValueError(f"generator count mismatch: {p.n} vs {at.n}")
    acc = GrassmannElement.scalar(p.n, 0)
    for c in reversed(p.coeffs):
        acc = acc * at + c
    return acc


# -- text serialization -------------------------------------------------------

_COEFF_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _format_fraction(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_fraction(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"coefficient must be a string '<int>/<int>', got {text!r}")
    s = str(text).strip()
    if not _COEFF_RE.match(s):
        raise InputError(f"malformed coefficient {text!r}")
    if s.endswith("/0"):
        raise InputError(f"zero denominator in coefficient {text!r}")
    return Fraction(s)


def element_to_terms(x: GrassmannElement) -> list[dict]:
    """Canonical term list: terms ordered by degree, then lexicographically."""
    return [
        {"coeff": _format_fraction(x.terms[m]), "monomial": _monomial_indices(m)}
        for m in sorted(x.terms, key=_monomial_sort_key)
    ]


def element_from_terms(terms, n: int) -> GrassmannElement:
    if not isinstance(terms, list):
        raise InputError(f"term list expected, got {type(terms).__name__}")
    out: dict[int, Fraction] = {}
    for t in terms:
        if not isinstance(t, dict) or set(t) != {"coeff", "monomial"}:
            raise InputError(f"term must have exactly 'coeff' and 'monomial': {t!r}")
        mono = t["monomial"]
        if not isinstance(mono, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in mono):
            raise InputError(f"monomial must be a list of integers: {mono!r}")
        if any(b <= a for a, b in zip(mono, mono[1:])):
            raise InputError(f"non-increasing monomial {mono}")
        if mono and not (1 <= mono[0] and mono[-1] <= n):
            raise InputError(f"monomial {mono} uses generators outside 1..{n}")
        mask = 0
        for i in mono:
            mask |= 1 << (i - 1)
        if mask in out:
            raise InputError(f"duplicate monomial {mono}")
        out[mask] = _parse_fraction(t["coeff"])
    return GrassmannElement(n, out)
