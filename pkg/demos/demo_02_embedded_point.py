"""
The same scheme from different generators
=========================================

The line x0 = 0 with an embedded point at the origin is cut out by
(x0^2, x0*x1).  Its CSM class only sees the support, so it must agree
with the class of the reduced line given by x0 alone.  The classes on the
product P^2 x P^2 used along the way do depend on the generators.
"""

from csmclasses.charcls import csm_inclusion_exclusion, csm_main, csm_via_calX, normalize_input
from csmclasses.poly import VarSpec, parse_poly

V = VarSpec(3)
fat = [parse_poly(t, V) for t in ("x0^2", "x0*x1", "0")]
line = [parse_poly(t, V) for t in ("x0", "0", "0")]

a = csm_main(normalize_input(fat, 2))
b = csm_main(normalize_input(line, 2))

# pushed forward to P^2 the two agree
print("csm with embedded point:", a.csm)
print("csm of the reduced line:", b.csm)

# but the classes on P^2 x P^2 before pushing forward do not
print("product class, (x0^2, x0*x1, 0):", a.integrand)
print("product class, (x0, 0, 0):      ", b.integrand)

# two independent routes confirm the answer
print("inclusion-exclusion:", csm_inclusion_exclusion(fat, 2))
print("hypersurface in P^2 x P^2:", csm_via_calX(normalize_input(fat, 2)))
