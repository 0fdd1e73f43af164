import random
from fractions import Fraction

from diffoplab.algebra import catalog, matrix_algebra, quaternion, trunc_poly
from diffoplab.bimodule import regular_bimodule
from diffoplab.cecalc import (
    CochainComplex,
    MinimalCalculus,
    ce_coboundary_matrix,
    ce_duality_check,
    ce_forms,
    exact_one_form,
    form_bimodule,
    wedge,
)
from diffoplab.derivations import derivations
from diffoplab.diffops import dv_first_order
from diffoplab.fields import QQ
from diffoplab.homspace import HomSpace, LinMap


def der_of(a):
    return derivations(a, regular_bimodule(a))


def test_form_space_dims():
    # O^0 = A always
    a2 = trunc_poly(2)
    assert ce_forms(a2, 0).dim == 2
    d2 = der_of(a2)
    assert d2.dim == 1
    # x·(x∂) = 0 forces the value of a one-form into the annihilator of x
    assert ce_forms(a2, 1, d2).dim == 1
    # alternating one-dimensional argument space: no two-forms
    assert ce_forms(a2, 2, d2).dim == 0

    m2 = matrix_algebra(2)
    dm = der_of(m2)
    assert dm.dim == 3
    # center is scalar: one-forms are the full linear dual, 3·4 = 12
    assert ce_forms(m2, 1, dm).dim == 12

    a3 = trunc_poly(3)
    d3 = der_of(a3)
    assert ce_forms(a3, 1, d3).dim == 2


def test_exact_one_form_is_evaluation():
    # (da)(u) = u(a) coordinatewise
    a3 = trunc_poly(3)
    d3 = der_of(a3)
    for i in range(3):
        flat = exact_one_form(a3, d3, a3.basis_vector(i))
        fs = ce_forms(a3, 1, d3)
        for t, u in enumerate(d3.basis_maps()):
            assert fs.value_at(flat, (t,)) == u.apply(a3.basis_vector(i))
        assert fs.contains(flat)
    # d(1) = 0
    assert all(x == 0 for x in exact_one_form(a3, d3, a3.unit))


def test_coboundary_squares_to_zero_on_catalog():
    for spec in ["trunc_poly:2", "trunc_poly:3", "square_zero:2", "group_z:3",
                 "matrix:2", "quaternion"]:
        a = catalog(spec)
        cx = CochainComplex(a, cap=3)
        assert cx.d_squared_is_zero(), spec
    g2 = catalog("grassmann:2")
    cx = CochainComplex(g2, cap=2)
    assert cx.d_squared_is_zero()


def test_dd_zero_on_basis_elements():
    a3 = trunc_poly(3)
    cx = CochainComplex(a3, cap=2)
    for i in range(3):
        da = cx.d[0].apply(a3.basis_vector(i))
        dda = cx.d[1].apply(da)
        assert all(x == 0 for x in dda)


def test_wedge_with_degree_zero_unit():
    a3 = trunc_poly(3)
    d3 = der_of(a3)
    phi = exact_one_form(a3, d3, a3.basis_vector(1))
    wedged = wedge(a3, d3, list(a3.unit), 0, phi, 1)
    assert wedged == phi


def test_central_exact_forms_anticommute():
    # da∧da' = -da'∧da for central a, a'
    a3 = trunc_poly(3)
    d3 = der_of(a3)
    dx = exact_one_form(a3, d3, a3.basis_vector(1))
    dx2 = exact_one_form(a3, d3, a3.basis_vector(2))
    lhs = wedge(a3, d3, dx, 1, dx2, 1)
    rhs = wedge(a3, d3, dx2, 1, dx, 1)
    assert lhs == [QQ.neg(x) for x in rhs]


def test_ce_central_one_forms_commute_with_algebra():
    # a·(da') = (da')·a inside the CE calculus (values commute for
    # commutative algebras); this is the counterpoint to the universal
    # calculus where it fails
    a2 = trunc_poly(2)
    d2 = der_of(a2)
    dx = exact_one_form(a2, d2, a2.basis_vector(1))
    x = a2.basis_vector(1)
    left = []
    for t in range(d2.dim):
        left.extend(a2.multiply(x, dx[t * 2:(t + 1) * 2]))
    right = []
    for t in range(d2.dim):
        right.extend(a2.multiply(dx[t * 2:(t + 1) * 2], x))
    assert left == right


def rand_form_element(rng, fs):
    coords = [Fraction(rng.randrange(-3, 4)) for _ in range(fs.dim)]
    return fs.space.linear_combination(coords)


def test_wedge_leibniz_random_pairs():
    a3 = trunc_poly(3)
    d3 = der_of(a3)
    forms = [ce_forms(a3, k, d3) for k in range(4)]
    dmats = [ce_coboundary_matrix(a3, d3, k) for k in range(3)]
    rng = random.Random(42)
    for _ in range(25):
        r, s = rng.choice([(0, 0), (0, 1), (1, 0), (1, 1), (0, 2)])
        phi = rand_form_element(rng, forms[r])
        psi = rand_form_element(rng, forms[s])
        w = wedge(a3, d3, phi, r, psi, s)
        lhs = dmats[r + s].apply(w)
        dphi = dmats[r].apply(phi) if r < 3 else None
        dpsi = dmats[s].apply(psi)
        term1 = wedge(a3, d3, dphi, r + 1, psi, s)
        term2 = wedge(a3, d3, phi, r, dpsi, s + 1)
        if r % 2 == 1:
            term2 = [QQ.neg(x) for x in term2]
        rhs = [QQ.add(x, y) for x, y in zip(term1, term2)]
        assert lhs == rhs


def test_wedge_graded_commutative_on_commutative_algebra():
    a3 = trunc_poly(3)
    d3 = der_of(a3)
    forms = [ce_forms(a3, k, d3) for k in range(3)]
    rng = random.Random(7)
    for _ in range(15):
        r, s = rng.choice([(0, 1), (1, 1), (0, 2), (1, 2)])
        phi = rand_form_element(rng, forms[r])
        psi = rand_form_element(rng, forms[s])
        lhs = wedge(a3, d3, phi, r, psi, s)
        rhs = wedge(a3, d3, psi, s, phi, r)
        if (r * s) % 2 == 1:
            rhs = [QQ.neg(x) for x in rhs]
        assert lhs == rhs


def test_minimal_calculus_trunc3():
    a3 = trunc_poly(3)
    mc = MinimalCalculus(a3)
    assert mc.one_forms.dim == 2
    o1 = mc.one_forms_bimodule()
    assert o1.validate().ok
    d0 = mc.d0_matrix()
    assert all(x == 0 for x in d0.apply(a3.unit))


def test_duality_dims():
    # derivations ≅ Hom_{A-A}(O^1, A): 2 for trunc3, 3 for M2, 3 for quaternions
    rep = ce_duality_check(trunc_poly(3))
    assert rep.der_dim == 2 and rep.hom_dim == 2 and rep.ok
    rep = ce_duality_check(matrix_algebra(2))
    assert rep.der_dim == 3 and rep.hom_dim == 3 and rep.ok
    rep = ce_duality_check(quaternion())
    assert rep.der_dim == 3 and rep.hom_dim == 3 and rep.ok
    # no derivations at all: both sides zero
    rep = ce_duality_check(trunc_poly(1))
    assert rep.der_dim == 0 and rep.hom_dim == 0 and rep.ok


def test_d_is_first_order_commutative():
    a3 = trunc_poly(3)
    cx = CochainComplex(a3, cap=2)
    for k in range(2):
        src = form_bimodule(a3, cx.der, k, cx.forms[k].space, f"O{k}")
        dst = form_bimodule(a3, cx.der, k + 1, cx.forms[k + 1].space, f"O{k+1}")
        hom = HomSpace(src, dst)
        dmap = LinMap(src, dst, cx.d[k])
        assert hom.iterated_delta_vanishes(dmap, 1)
        assert not hom.iterated_delta_vanishes(dmap, 0) or cx.d[k].is_zero()


def test_d_on_minimal_calculus_is_bimodule_first_order_m2():
    m2 = matrix_algebra(2)
    mc = MinimalCalculus(m2)
    o1 = mc.one_forms_bimodule()
    reg = regular_bimodule(m2)
    d0 = LinMap(reg, o1, mc.d0_matrix())
    assert dv_first_order(reg, o1).contains(d0)


def test_derivations_preserve_center_via_forms():
    # reported at the algebra level; asserted here where derivations live
    for spec in ["matrix:2", "quaternion"]:
        a = catalog(spec)
        z = a.center()
        for u in der_of(a).basis_maps():
            for row in z.basis:
                assert z.contains(u.apply(list(row)))


def test_complex_report_dict():
    a3 = trunc_poly(3)
    cx = CochainComplex(a3, cap=2)
    d = cx.to_dict()
    assert d["d_squared_zero"] is True
    assert d["dims"][0] == 3
    assert len(d["betti"]) == 3
