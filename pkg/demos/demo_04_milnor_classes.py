"""
Milnor classes of complete intersections
========================================

For a complete intersection X the virtual class c_vir is the class X
would have if it were smooth; the Milnor class measures the difference
and is supported on the singular locus.
"""

from csmclasses.charcls import is_smooth_complete_intersection, milnor_ci, normalize_input
from csmclasses.poly import VarSpec, parse_poly


def show(title, n, texts):
    F = [parse_poly(t, VarSpec(n + 1)) for t in texts]
    rep = milnor_ci(normalize_input(F, n))
    smooth = is_smooth_complete_intersection(F, n)
    print(f"{title} (smooth: {smooth})")
    print(f"  c_vir  = {rep.cvir}")
    print(f"  csm    = {rep.csm}")
    print(f"  milnor = {rep.milnor}")


# a node contributes its Milnor number 1 in the point class
show("nodal cubic", 2, ["x1^2*x2 - x0^3 - x0^2*x2"])

# a point of length 6 from equations of different degrees
show("fat point", 2, ["x0^2", "x1^3"])

# a smooth quartic del Pezzo surface has no Milnor class
show("two quadrics in P^4", 4, ["x0^2 + x1^2 + x2^2 + x3^2 + x4^2",
                                "x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2 + 5*x4^2"])
