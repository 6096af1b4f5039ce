"""
Grassmann numbers in a few lines
================================

Elements are sums of monomials in anticommuting generators with exact
rational coefficients.
"""
from berez import GrassmannElement

###############################################################################
# Generators square to zero and anticommute.
n = 4
x1, x2 = GrassmannElement.generator(n, 1), GrassmannElement.generator(n, 2)
print(x1 * x2, "|", x2 * x1, "|", x1 * x1)

###############################################################################
# Body and soul. Anything with a nonzero body is invertible.
a = 3 + x1 * x2 + GrassmannElement.generator(n, 3) * GrassmannElement.generator(n, 4)
print("a      =", a)
print("body   =", a.body, " soul =", a.soul)
print("1/a    =", a.inverse())
print("a/a    =", a * a.inverse())

###############################################################################
# exp of a nilpotent element is a finite sum.
s = x1 * x2
print("exp(x1 x2) =", s.exp())
