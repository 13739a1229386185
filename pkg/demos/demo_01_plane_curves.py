"""
CSM classes of plane curves
===========================

The CSM class of a curve C in P^2 is deg(C) H + chi(C) H^2, so the
coefficient of the point class is the topological Euler characteristic.
A smooth cubic has chi = 0, a node raises it by one and a cusp by two.
"""

from csmclasses.charcls import csm_main, normalize_input
from csmclasses.poly import VarSpec, parse_poly

V = VarSpec(3)

curves = {
    "smooth cubic": "x0^3 + x1^3 + x2^3",
    "nodal cubic": "x1^2*x2 - x0^3 - x0^2*x2",
    "cuspidal cubic": "x1^2*x2 - x0^3",
    "three concurrent lines": "x0*x1*(x0 + x1)",
    "conic": "x0*x1 - x2^2",
}

# each generator list is padded with zeros to n+1 = 3 entries
for name, text in curves.items():
    rep = csm_main(normalize_input([parse_poly(text, V)], 2))
    print(f"{name:24s} csm = {rep.csm}   chi = {rep.euler}")

# the Segre class behind the last computation, on P^2 x P^2
print("Segre class of the auxiliary scheme:", rep.segre.cls)
print("projective degrees:", rep.segre.degrees.rows())
