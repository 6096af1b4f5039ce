"""
Cayley-Hamilton for supermatrices
=================================

Ber(A - z) is a rational function of z. Multiplying numerator and
denominator and dividing out the resultant gives a polynomial of degree
p + q that annihilates A.
"""
import random

from berez.invariants import eval_matrix_poly, min_poly, resultant
from berez.oracle import random_even_supermatrix
from berez.supermatrix import Supermatrix

###############################################################################
# Diagonal case first: eigenvalues 2 (even) and 3 (odd).
D = Supermatrix.diagonal([2, 3], 1, 1)
print("P_D coefficients:", [str(x) for x in min_poly(D).coeffs])

###############################################################################
rng = random.Random(3)
A = random_even_supermatrix(rng, 2, 2, 2)
P = min_poly(A)
print("R      =", resultant(A))
print("degree =", P.degree)
print("P(A)   = 0:", eval_matrix_poly(P, A).is_zero())
