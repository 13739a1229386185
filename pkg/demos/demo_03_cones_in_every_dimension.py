"""
One computation for every ambient dimension
===========================================

Equations in x0, x1, x2 also define a scheme X_N in every P^N, N >= 2: a
cone over the plane scheme.  A single Segre class on P^3 x P^3 yields a
polynomial gamma with csm(X_N) = (1+H)^(N-2) gamma(H) for all N at once.
"""

from csmclasses.charcls import csm_main, normalize_input
from csmclasses.poly import VarSpec, parse_poly
from csmclasses.zeta import csm_all_N, format_tu, gamma_from_numerator, involution_Q, zeta_numerator

# the three coordinate points of P^2
F = [parse_poly(t, VarSpec(3)) for t in ("x1*x2", "x0*x2", "x0*x1")]
P = zeta_numerator(normalize_input(F, 2))
print("P(t, u) =", P)
print("Q(t, u) =", format_tu(involution_Q(P)))

gamma = gamma_from_numerator(P)
print("gamma(t) =", gamma)

for N in range(2, 8):
    c = csm_all_N(gamma, N)
    print(f"P^{N}: csm = {c}   chi = {c.coeff(N)}")

# direct check in P^3, where the same equations cut out three lines through a point
F3 = [parse_poly(t, VarSpec(4)) for t in ("x1*x2", "x0*x2", "x0*x1")]
print("direct computation in P^3:", csm_main(normalize_input(F3, 3)).csm)
