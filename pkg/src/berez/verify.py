"""
Identity checks run by ``berez verify``: every check is an exact equality on
one matrix, reported as pass, fail or skip (with the failed precondition).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .errors import BerezError, NonGeneric, NotInvertible
from .grassmann import GrassmannElement
from .invariants import (
    ber_minus_from_coeffs,
    ber_plus_from_coeffs,
    berezinian_from_coeffs,
    c_recurrence_residuals,
    char_coeffs,
    default_window,
    denominator_from_coeffs,
    dual_recurrence_residuals,
    eval_matrix_poly,
    gamma_recurrence_residuals,
    hankel_residuals,
    invariant_seq,
    min_poly,
    numerator_coeffs,
    resultant_from_coeffs,
    _gamma_from,
)
from .oracle import MAX_BASIS, exterior_basis_size, exterior_power_trace, random_even_supermatrix
from .supermatrix import Supermatrix, berezinian_classical, even_block_det, exp_soul, inverse

__all__ = ["CheckResult", "resultant_sign", "verify_matrix", "battery", "BATTERY_DIMS"]

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

#: (p, q) pairs of the default battery.
BATTERY_DIMS = [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]


@dataclass(frozen=True)
class CheckResult:
    case: str
    name: str
    tag: str
    status: str
    reason: str = ""

    def line(self) -> str:
        return "\t".join([self.status, self.case, self.name, self.tag, self.reason]).rstrip("\t")


def resultant_sign(q: int) -> int:
    """Sign ``s`` with ``Ber+ = s R a_p`` and ``Ber- = s R b_q`` for the Hankel definitions."""
    return -1 if q % 2 else 1


def _all_zero(values) -> bool:
    return all(v.is_zero() for v in values)


class _Context:
    """Lazily computed quantities of one matrix, memoized for a single run."""

    def __init__(self, A: Supermatrix, rng: random.Random, corrupt_c2: bool, max_k: int | None,
                 window: tuple[int, int] | None):
        self.A = A
        self.rng = rng
        self.corrupt_c2 = corrupt_c2
        self.max_k = max_k
        self.window = window or default_window(A.p, A.q)
        self._memo: dict[str, object] = {}

    def get(self, key, fn):
        if key not in self._memo:
            try:
                self._memo[key] = fn()
            except (NonGeneric, NotInvertible) as e:
                self._memo[key] = e
        v = self._memo[key]
        if isinstance(v, BerezError):
            raise v
        return v

    @property
    def ber(self):
        return self.get("ber", lambda: berezinian_classical(self.A))

    @property
    def seq(self):
        def build():
            A = self.A
            lo, hi = self.window
            # enough terms for the recurrence and Hankel sweeps over the window
            m = max(hi + 2 * A.q, A.p + 3 * A.q, self.max_k or 0, 4)
            seq = invariant_seq(A, m, (lo - A.q, hi + 2 * A.q), ber=self.ber)
            if self.corrupt_c2:
                seq.c[2] = seq.c[2] + 1
                seq.gamma = _gamma_from(seq.c, seq.c_star, A.p, A.q, seq.window[0], seq.window[1], seq.c[0] * 0)
            return seq
        return self.get("seq", build)

    @property
    def c_plain(self):
        # c without the window machinery: needs no invertibility
        def build():
            c = char_coeffs(self.A, max(self.A.p + 3 * self.A.q, 4))
            if self.corrupt_c2:
                c[2] = c[2] + 1
            return c
        return self.get("c", build)

    @property
    def b(self):
        return self.get("b", lambda: denominator_from_coeffs(self.c_plain, self.A.p, self.A.q))

    @property
    def a(self):
        c = self.c_plain[: self.A.p + self.A.q + 1]
        return self.get("a", lambda: numerator_coeffs(c, self.b, self.A.p))

    @property
    def other(self):
        A = self.A
        return self.get("other", lambda: random_even_supermatrix(self.rng, A.p, A.q, A.n))


def _checks() -> list[tuple[str, str, Callable[[_Context], bool]]]:
    """(name, tag, predicate); predicates raise NonGeneric/NotInvertible to skip."""

    def parity_closure(ctx):
        A, B = ctx.A, ctx.other
        # constructing Supermatrix re-validates block parity
        mats = [A @ B, A + B, exp_soul(_soul_part(A))]
        try:
            mats.append(inverse(A))
        except NotInvertible:
            pass
        for M in mats:
            Supermatrix(M.p, M.q, M.entries, M.n)
        return True

    def trace_cyclic(ctx):
        A, B = ctx.A, ctx.other
        return (A @ B).supertrace() == (B @ A).supertrace()

    def inverse_two_sided(ctx):
        A = ctx.A
        try:
            Ai = inverse(A)
        except NotInvertible:
            raise NotInvertible("body of A singular") from None
        eye = Supermatrix.identity(A.p, A.q, A.n)
        return A @ Ai == eye and Ai @ A == eye and inverse(Ai) == A

    def multiplicative(ctx):
        A, B = ctx.A, ctx.other
        try:
            bb = berezinian_classical(B)
        except NotInvertible:
            raise NotInvertible("A11 body of the partner matrix singular") from None
        return berezinian_classical(A @ B) == ctx.ber * bb

    def exp_trace(ctx):
        D = _soul_part(ctx.A)
        return berezinian_classical(exp_soul(D)) == D.supertrace().exp()

    def exterior_route(ctx):
        A = ctx.A
        c = ctx.c_plain
        ok = True
        for k in range(0, 5):
            if exterior_basis_size(A.p, A.q, k) > MAX_BASIS:
                break
            ok &= exterior_power_trace(A, k) == c[k]
        return ok

    def formula_agreement(ctx):
        A = ctx.A
        return berezinian_from_coeffs(ctx.c_plain, A.p, A.q) == ctx.ber

    def ber_minus_gamma(ctx):
        A = ctx.A
        top = A.p - A.q
        seq = ctx.seq
        ctop = seq.c[top] if top >= 0 else seq.c[0] * 0
        return ctx.ber == ctop - seq.gamma[top]

    def p1_closed_form(ctx):
        A = ctx.A
        if A.q != 1 or A.p < 1:
            raise NonGeneric("only for p|1 with p >= 1")
        c = ctx.c_plain
        p = A.p
        if c[p + 1].body_is_zero():
            raise NonGeneric("c_{p+1} body singular")
        return ctx.ber == c[p - 1] - c[p] * c[p] * c[p + 1].inverse()

    def c_recurrence(ctx):
        A = ctx.A
        return _all_zero(c_recurrence_residuals(ctx.c_plain, ctx.b, A.p, A.q).values())

    def numerator_degree(ctx):
        A = ctx.A
        c = ctx.c_plain
        bb = [c[0], *ctx.b]
        for k in range(A.p + 1, len(c)):
            acc = c[0] * 0
            for j in range(min(k, A.q) + 1):
                acc = acc + bb[j] * c[k - j]
            if not acc.is_zero():
                return False
        return True

    def dual_recurrence(ctx):
        A = ctx.A
        lo = ctx.window[0]
        return _all_zero(dual_recurrence_residuals(ctx.seq.c_star, ctx.b, A.p, A.q, lo).values())

    def gamma_recurrence(ctx):
        lo, hi = ctx.window
        return _all_zero(gamma_recurrence_residuals(ctx.seq.gamma, ctx.b, lo, hi).values())

    def hankel_vanishing(ctx):
        lo, hi = ctx.window
        return _all_zero(hankel_residuals(ctx.seq.gamma, ctx.A.q, lo, hi).values())

    def resultant_structure(ctx):
        A = ctx.A
        c = ctx.c_plain
        p, q = A.p, A.q
        r = resultant_from_coeffs(c, p, q)
        sign = resultant_sign(q)
        one = c[0]
        a_top = ctx.a[-1] if p else one
        b_top = ctx.b[-1] if q else one
        plus, minus = ber_plus_from_coeffs(c, p, q), ber_minus_from_coeffs(c, p, q)
        return plus == r * a_top * sign and minus == r * b_top * sign

    def cayley_hamilton(ctx):
        A = ctx.A
        P = min_poly(A, ctx.c_plain[: A.p + A.q + 1])
        return P.degree <= A.p + A.q and eval_matrix_poly(P, A).is_zero()

    def ordinary_collapse(ctx):
        A = ctx.A
        if A.q != 0:
            raise NonGeneric("only for q = 0")
        n = A.p
        seq = ctx.seq
        same = all(seq.c[k] == seq.c_star[k] for k in range(n + 1))
        det = even_block_det(A.block(0, 0))
        return same and berezinian_from_coeffs(seq.c, n, 0) == det == seq.c[n]

    return [
        ("block-parity-closure", "even-supermatrix", parity_closure),
        ("supertrace-cyclicity", "supertrace", trace_cyclic),
        ("inverse-two-sided", "inverse", inverse_two_sided),
        ("ber-multiplicative", "multiplicativity", multiplicative),
        ("ber-exp-supertrace", "ber-exp", exp_trace),
        ("exterior-power-traces", "c_k=str-wedge^k", exterior_route),
        ("ber-formula-agreement", "berezin-vs-hankel", formula_agreement),
        ("ber-via-gamma", "ber=c-gamma", ber_minus_gamma),
        ("p|1-closed-form", "p|1-formula", p1_closed_form),
        ("c-recurrence", "recurrence-at-zero", c_recurrence),
        ("numerator-degree", "P/Q-degrees", numerator_degree),
        ("dual-recurrence", "recurrence-at-infinity", dual_recurrence),
        ("gamma-recurrence", "gamma-all-k", gamma_recurrence),
        ("hankel-vanishing", "hankel-gamma", hankel_vanishing),
        ("resultant-structure", "ber+-=R*a_p,b_q", resultant_structure),
        ("cayley-hamilton", "super-cayley-hamilton", cayley_hamilton),
        ("ordinary-collapse", "q=0-minors", ordinary_collapse),
    ]


def _soul_part(A: Supermatrix) -> Supermatrix:
    return Supermatrix._raw(A.p, A.q, A.n, [[x.soul for x in r] for r in A.entries])


def verify_matrix(A: Supermatrix, case: str = "input", seed: int = 0, corrupt_c2: bool = False,
                  max_k: int | None = None, window: tuple[int, int] | None = None) -> list[CheckResult]:
    """Run every applicable identity on ``A``; ``corrupt_c2`` injects a fault for self-testing."""
    ctx = _Context(A, random.Random(seed), corrupt_c2, max_k, window)
    out = []
    for name, tag, pred in _checks():
        try:
            ok = pred(ctx)
        except (NonGeneric, NotInvertible) as e:
            out.append(CheckResult(case, name, tag, SKIP, str(e)))
            continue
        out.append(CheckResult(case, name, tag, PASS if ok else FAIL))
    return out


def battery(seed: int = 0, n: int = 4, per_dims: int = 3, dims=None) -> Iterator[tuple[str, Supermatrix]]:
    """Seeded random cases, yielded in case-id order."""
    rng = random.Random(seed)
    for p, q in dims or BATTERY_DIMS:
        for i in range(per_dims):
            yield f"{p}|{q}#{i}", random_even_supermatrix(rng, p, q, n)
