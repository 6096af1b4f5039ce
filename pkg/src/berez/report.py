"""
Invariant report documents.

Every scalar is a Grassmann term list; sequences indexed by possibly negative
``k`` (``c_star``, ``gamma``) are objects keyed by the decimal string of ``k``.
A key whose precondition failed is left out and explained under ``"skipped"``.
"""

from __future__ import annotations

import json
from typing import Iterable

from .errors import InputError, NonGeneric, NotInvertible
from .grassmann import GrassmannElement, element_from_terms, element_to_terms
from .invariants import (
    ber_minus_from_coeffs,
    ber_plus_from_coeffs,
    berezinian_from_coeffs,
    default_window,
    denominator_from_coeffs,
    dual_coeffs,
    eval_matrix_poly,
    min_poly,
    newton_coeffs,
    numerator_coeffs,
    power_traces,
    resultant_from_coeffs,
    _gamma_from,
)
from .supermatrix import Supermatrix, berezinian_classical

__all__ = ["build_report", "dumps", "loads", "INVARIANT_KEYS", "BER_KEYS", "MINPOLY_KEYS"]

INVARIANT_KEYS = ("s", "c", "c_star", "gamma", "P", "Q")
BER_KEYS = ("ber_classical", "ber_traces", "ber_plus", "ber_minus", "resultant")
MINPOLY_KEYS = ("min_poly", "residual")

_SEQ_KEYS = {"s", "c", "P", "Q", "min_poly"}
_MAP_KEYS = {"c_star", "gamma"}
_SCALAR_KEYS = {"ber_classical", "ber_traces", "ber_plus", "ber_minus", "resultant"}


def build_report(A: Supermatrix, keys: Iterable[str], max_k: int | None = None,
                 window: tuple[int, int] | None = None) -> dict:
    """Compute the requested report keys; failed preconditions go to ``"skipped"``."""
    keys = list(keys)
    p, q, n = A.p, A.q, A.n
    lo, hi = window if window is not None else default_window(p, q)
    shown = max_k if max_k is not None else max(hi, p + q, 1)
    m = max(shown, hi, p + q, 1)
    report: dict = {"p": p, "q": q, "generators": n}
    skipped: dict[str, str] = {}
    memo: dict = {}

    def attempt(key, fn):
        try:
            memo[key] = fn()
        except (NonGeneric, NotInvertible) as e:
            memo[key] = None
            skipped[key] = str(e)
        return memo[key]

    s = power_traces(A, m)
    c = newton_coeffs(s, m, GrassmannElement.scalar(n, 1))
    one = c[0]

    def ber():
        if "ber" not in memo:
            attempt("ber", lambda: berezinian_classical(A))
        if memo["ber"] is None:
            raise NotInvertible(skipped["ber"])
        return memo["ber"]

    def b():
        if "b" not in memo:
            attempt("b", lambda: denominator_from_coeffs(c, p, q))
        if memo["b"] is None:
            raise NonGeneric(skipped["b"])
        return memo["b"]

    def cstar():
        top = p - q
        if lo > top:
            return {}
        if "cstar" not in memo:
            memo["cstar"] = dual_coeffs(A, top - lo, ber())
        return memo["cstar"]

    def mp():
        if "mp" not in memo:
            attempt("mp", lambda: min_poly(A, c[: p + q + 1]))
        if memo["mp"] is None:
            raise NonGeneric(skipped["mp"])
        return memo["mp"]

    producers = {
        "s": lambda: s[:shown],
        "c": lambda: c[: shown + 1],
        "c_star": cstar,
        "gamma": lambda: _gamma_from(c, cstar(), p, q, lo, hi, one * 0),
        "Q": lambda: [one, *b()],
        "P": lambda: [one, *numerator_coeffs(c[: p + q + 1], b(), p)],
        "ber_classical": ber,
        "ber_traces": lambda: berezinian_from_coeffs(c, p, q),
        "ber_plus": lambda: ber_plus_from_coeffs(c, p, q),
        "ber_minus": lambda: ber_minus_from_coeffs(c, p, q),
        "resultant": lambda: resultant_from_coeffs(c, p, q),
        "min_poly": lambda: list(mp().coeffs),
        "residual": lambda: eval_matrix_poly(mp(), A),
    }
    for key in keys:
        if key not in producers:
            raise KeyError(f"unknown report key {key!r}")
        try:
            value = producers[key]()
        except (NonGeneric, NotInvertible) as e:
            skipped[key] = str(e)
            continue
        report[key] = value
    if "ber_classical" in report and "ber_traces" in report:
        report["agree"] = report["ber_classical"] == report["ber_traces"]
    # internal memo keys never surface
    report["skipped"] = {k: v for k, v in skipped.items() if k in producers}
    return report


def _encode(key, value):
    if key in _SEQ_KEYS:
        return [element_to_terms(x) for x in value]
    if key in _MAP_KEYS:
        return {str(k): element_to_terms(value[k]) for k in sorted(value, reverse=True)}
    if key in _SCALAR_KEYS:
        return element_to_terms(value)
    if key == "residual":
        return value.to_json()["entries"]
    return value


def dumps(report: dict) -> str:
    """Deterministic JSON text of a report built by :func:`build_report`."""
    doc = {k: _encode(k, v) for k, v in report.items()}
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str) -> dict:
    """Parse a report back into Grassmann values; ``dumps(loads(t)) == t``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"report is not valid JSON: {e}") from None
    n = doc["generators"]
    out = {}
    for key, v in doc.items():
        if key in _SEQ_KEYS:
            out[key] = [element_from_terms(t, n) for t in v]
        elif key in _MAP_KEYS:
            out[key] = {int(k): element_from_terms(t, n) for k, t in v.items()}
        elif key in _SCALAR_KEYS:
            out[key] = element_from_terms(v, n)
        elif key == "residual":
            out[key] = Supermatrix.from_json({"generators": n, "p": doc["p"], "q": doc["q"], "entries": v})
        else:
            out[key] = v
    return out
