"""
Recurrences and Hankel vanishing
================================

The coefficients c_k satisfy a linear recurrence from k = p - q + 1 onward.
Their duals c*_k satisfy the same one going the other way, and the
difference gamma_k satisfies it for every k, so its (q+1)-Hankel
determinants vanish.
"""
import random

from berez.invariants import (
    denominator_coeffs,
    gamma_recurrence_residuals,
    hankel_residuals,
    invariant_seq,
)
from berez.oracle import random_even_supermatrix

rng = random.Random(12)
A = random_even_supermatrix(rng, 2, 1, 2)
p, q = A.p, A.q
lo, hi = -q - 2, p + 2 * q

seq = invariant_seq(A, window=(lo - q, hi + 2 * q))
b = denominator_coeffs(A)
print("Q(z) coefficients:", b)

###############################################################################
for k in range(lo, hi + 1):
    print(f"gamma_{k:>2} = {seq.gamma[k]}")

###############################################################################
rec = gamma_recurrence_residuals(seq.gamma, b, lo, hi)
han = hankel_residuals(seq.gamma, q, lo, hi)
print("recurrence residuals all zero:", all(r.is_zero() for r in rec.values()))
print("hankel dets all zero        :", all(r.is_zero() for r in han.values()))
