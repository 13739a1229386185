import json
import warnings

import pytest

from csmclasses.charcls import (InputError, NotCompleteIntersectionError, build_Y_ideal, c_vir,
                                c_vir_ci, csm_hypersurface, csm_inclusion_exclusion, csm_main,
                                csm_via_calX, is_smooth_complete_intersection, milnor_ci,
                                normalize_input, projective_dimension, raise_to_degree)
from csmclasses.chow import ChowClass, chern_tangent
from csmclasses.poly import QQ, MultiPoly, VarSpec, parse_poly, random_form, BiDegree, GF

from .test_chow import Hs, truncate


def gens(n, *texts):
    V = VarSpec(n + 1)
    return [parse_poly(t, V, QQ) for t in texts]


def H(n, text):
    return ChowClass.parse(text, n)


# --- input handling ----------------------------------------------------------

def test_Y_ideal_of_embedded_point_example():
    sys = normalize_input(gens(2, "x0^2", "x0*x1", "0"), 2)
    Y = build_Y_ideal(sys)
    V = VarSpec(3, 3)
    expected = {parse_poly(t, V, QQ) for t in ("x0^2", "x0*x1", "2*x0*y0 + x1*y1", "x0*y1")}
    assert set(Y.gens) == expected
    assert (Y.n, Y.r) == (2, 2)


def test_Y_ideal_of_cubic_pair():
    sys = normalize_input(gens(6, "x1*x2*x3", "x0*x1^2 + x2^3"), 6, target_count=2)
    V = VarSpec(7, 2)
    expected = {parse_poly(t, V, QQ) for t in (
        "x1*x2*x3", "x0*x1^2 + x2^3", "x1^2*y1", "x2*x3*y0 + 2*x0*x1*y1",
        "x1*x3*y0 + 3*x2^2*y1", "x1*x2*y0")}
    assert set(build_Y_ideal(sys).gens) == expected


def test_normalize_raises_and_pads():
    sys = normalize_input(gens(2, "x0", "x1^2"), 2)
    assert sys.d == 2 and sys.r == 3  # x0*x0, x0*x1, x0*x2, x1^2
    assert all(f.total_degree() == 2 for f in sys.F)
    padded = normalize_input(gens(2, "x0", "x1"), 2)
    assert padded.r == 2 and padded.F[2].is_zero()
    assert normalize_input(gens(2, "x0", "x1"), 2, target_count=5).r == 4


def test_normalize_rejects_bad_input():
    with pytest.raises(InputError):
        normalize_input(gens(2, "x0 + x1^2"), 2)
    with pytest.raises(InputError):
        normalize_input(gens(2, "x0", "x1", "x2"), 2, target_count=2)
    with pytest.raises(InputError):
        normalize_input([], 2)
    with pytest.raises(InputError):
        normalize_input(gens(3, "x0"), 2)


def test_raise_to_degree_counts():
    out = raise_to_degree(gens(3, "x0", "x1^3"), 3)
    assert len(out) == 10 + 1


def test_combos_are_seeded():
    F = gens(2, "x0^2", "x0*x1")
    a = normalize_input(F, 2, combos=4, seed=1)
    b = normalize_input(F, 2, combos=4, seed=1)
    assert a.F == b.F and len(a.F) == 4
    with pytest.raises(InputError):
        normalize_input(F, 2, combos=2)


# --- main route ---------------------------------------------------------------

@pytest.mark.parametrize("n,texts,expected", [
    (2, ["x0*x1 - x2^2"], "2*H + 2*H^2"),                       # smooth conic
    (2, ["x1^2*x2 - x0^3 - x0^2*x2"], "3*H + H^2"),             # nodal cubic, chi = 1
    (2, ["x1^2*x2 - x0^3"], "3*H + 2*H^2"),                     # cuspidal cubic, chi = 2
    (2, ["x0^2", "x0*x1", "0"], "H + 2*H^2"),                   # line with embedded point
    (2, ["x0", "0", "0"], "H + 2*H^2"),
    (2, ["x1*x2", "x0*x2", "x0*x1"], "3*H^2"),                  # three points
    (3, ["x0*x1 - x2*x3"], "2*H + 4*H^2 + 4*H^3"),               # smooth quadric surface
    (3, ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"], "3*H^2 + 2*H^3"),  # twisted cubic
])
def test_csm_main(n, texts, expected):
    rep = csm_main(normalize_input(gens(n, *texts), n))
    assert rep.csm == H(n, expected)
    assert rep.euler == H(n, expected).coeff(n)


def test_csm_main_needs_enough_generators():
    sys = normalize_input(gens(2, "x0"), 2, target_count=2)
    with pytest.raises(InputError):
        csm_main(sys)


def test_embedded_point_product_classes():
    a = csm_main(normalize_input(gens(2, "x0^2", "x0*x1", "0"), 2))
    b = csm_main(normalize_input(gens(2, "x0", "0", "0"), 2))
    assert a.integrand == ChowClass.parse("H^2 + (H - H^2)*h + (H + 2*H^2)*h^2", 2, 2)
    assert b.integrand == ChowClass.parse("(H + H^2)*h + (H + 2*H^2)*h^2", 2, 2)


def test_report_json():
    rep = csm_main(normalize_input(gens(2, "x0*x1 - x2^2"), 2))
    d = json.loads(rep.to_json())
    assert d["csm"] == ["0", "2", "2"] and d["euler"] == "2"
    assert d["meta"]["method"] == "main"


# --- oracles ---------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_smooth_plane_curve(d):
    F = random_form(BiDegree(d, 0), VarSpec(3), 40 + d, GF(32003))
    F = MultiPoly(VarSpec(3), QQ, F.terms)
    assert csm_hypersurface(F, 2) == ChowClass(2, -1, {(1, 0): d, (2, 0): 3 * d - d * d})


def test_constant_hypersurface_is_empty():
    assert csm_hypersurface(gens(2, "5")[0], 2).is_zero()


def test_inclusion_exclusion_on_points():
    assert csm_inclusion_exclusion(gens(2, "x0", "x1"), 2) == H(2, "H^2")
    assert csm_inclusion_exclusion(gens(2, "0"), 2) == chern_tangent(2)


def test_inclusion_exclusion_warns_on_many_generators():
    F = gens(1, *(["x0"] * 7))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        csm_inclusion_exclusion(F, 1)
    assert any(issubclass(x.category, RuntimeWarning) for x in w)


def test_calX_route():
    sys = normalize_input(gens(2, "x0^2", "x0*x1", "0"), 2)
    assert csm_via_calX(sys) == H(2, "H + 2*H^2")
    assert csm_via_calX(normalize_input(gens(2, "0"), 2)) == chern_tangent(2)


# --- virtual and Milnor classes ------------------------------------------------------

def test_c_vir_matches_series():
    expr = (1 + Hs) ** 7 * (3 * Hs / (1 + 3 * Hs)) ** 2
    assert c_vir(6, [3, 3]) == truncate(expr, 6, -1)
    assert c_vir_ci(6, 3, 1) == c_vir(6, [3, 3])
    assert c_vir(6, [3, 3]) == H(6, "9*H^2 + 9*H^3 + 54*H^4 - 90*H^5 + 369*H^6")


def test_milnor_of_nodal_cubic():
    rep = milnor_ci(normalize_input(gens(2, "x1^2*x2 - x0^3 - x0^2*x2"), 2))
    assert rep.milnor == H(2, "H^2")
    assert rep.cvir == H(2, "3*H")
    assert rep.csm == H(2, "3*H + H^2")


def test_milnor_of_fat_point_mixed_degrees():
    rep = milnor_ci(normalize_input(gens(2, "x0^2", "x1^3"), 2))
    assert rep.csm == H(2, "H^2") and rep.cvir == H(2, "6*H^2")
    assert rep.milnor == H(2, "5*H^2")


def test_milnor_vanishes_on_smooth_quadric_pair():
    F = gens(3, "x0^2 + x1^2 + x2^2 + x3^2", "x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2")
    assert is_smooth_complete_intersection(F, 3)
    assert milnor_ci(normalize_input(F, 3)).milnor.is_zero()


def test_milnor_rejects_non_complete_intersections():
    with pytest.raises(NotCompleteIntersectionError):
        milnor_ci(normalize_input(gens(2, "x0*x1", "x0*x2"), 2))
    with pytest.raises(NotCompleteIntersectionError):
        milnor_ci(normalize_input(gens(2, "x0", "0"), 2))


def test_smoothness_and_dimension():
    assert is_smooth_complete_intersection(gens(2, "x0*x1 - x2^2"), 2)
    assert not is_smooth_complete_intersection(gens(2, "x1^2*x2 - x0^3 - x0^2*x2"), 2)
    assert projective_dimension(gens(3, "x0", "x1"), 3) == 1
    assert projective_dimension(gens(2, "x0", "x1", "x2"), 2) == -1
