"""
Segre classes from projective degrees
=====================================

Segre classes are computed by counting points: each projective degree is
the size of a random zero-dimensional slice, found with a Groebner basis
over a prime field.  For a complete intersection the answer has a closed
form, which makes a convenient check.
"""

from csmclasses.chow import complete_intersection_segre
from csmclasses.poly import GF, BiDegree, VarSpec, parse_poly, random_form
from csmclasses.segre import segre_class

R = GF(32003)

# two general forms of bidegrees (1, 1) and (2, 1) on P^2 x P^2
V = VarSpec(3, 3)
F = [random_form(BiDegree(1, 1), V, 1, R), random_form(BiDegree(2, 1), V, 2, R)]
res = segre_class(F, 2, 2)
print("projective degrees:", res.degrees.rows())
print("Segre class:       ", res.cls)
print("closed form:       ", complete_intersection_segre([(1, 1), (2, 1)], 2, 2))
print("agreeing runs:", res.trials, "prime:", res.meta["prime"])

# a nonreduced divisor: the doubled line x0^2 = 0 in P^2
doubled = segre_class([parse_poly("x0^2", VarSpec(3))], 2)
print("doubled line:", doubled.cls)
