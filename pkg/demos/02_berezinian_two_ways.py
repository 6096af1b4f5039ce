"""
Berezinian two ways
===================

The block formula ``det(A00 - A01 A11^-1 A10) / det A11`` against the ratio
of Hankel determinants built only from supertraces of powers.
"""
import random

from berez import berezinian_classical, berezinian_via_traces, char_coeffs
from berez.oracle import random_even_supermatrix

rng = random.Random(7)
A = random_even_supermatrix(rng, 2, 1, 4)
print(A)

###############################################################################
# The characteristic coefficients c_k come from power supertraces by Newton's
# recurrence, no determinants involved.
for k, ck in enumerate(char_coeffs(A, 4)):
    print(f"c_{k} = {ck}")

###############################################################################
ber_block = berezinian_classical(A)
ber_trace = berezinian_via_traces(A)
print("block :", ber_block)
print("traces:", ber_trace)
print("equal :", ber_block == ber_trace)
