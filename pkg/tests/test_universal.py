from fractions import Fraction

import pytest

from diffoplab.algebra import catalog, matrix_algebra, trunc_poly
from diffoplab.bimodule import regular_bimodule
from diffoplab.cecalc import MinimalCalculus
from diffoplab.derivations import derivations, inner_derivation
from diffoplab.fields import QQ
from diffoplab.linalg import Matrix, kernel
from diffoplab.universal import (
    UniversalCalculus,
    extend_hom,
    universal_factorize,
    zero_calculus,
)

from oracles import multiplication_matrix, nullity


def test_omega1_is_multiplication_kernel():
    for spec in ["trunc_poly:2", "trunc_poly:3", "square_zero:2", "matrix:2",
                 "quaternion", "group_z:3", "grassmann:2"]:
        uc = UniversalCalculus(catalog(spec), cap=1)
        assert uc.omega1_equals_multiplication_kernel(), spec


def test_omega1_dims_against_oracle():
    # oracle: nullity of the explicit multiplication matrix
    m2 = matrix_algebra(2)
    table = [[m2.sc[i][j] for j in range(4)] for i in range(4)]
    assert nullity(multiplication_matrix(table, 4)) == 12
    uc = UniversalCalculus(m2, cap=1)
    assert uc.omega1.dim == 12

    a2 = trunc_poly(2)
    table2 = [[a2.sc[i][j] for j in range(2)] for i in range(2)]
    assert nullity(multiplication_matrix(table2, 2)) == 2
    assert UniversalCalculus(a2, cap=1).omega1.dim == 2


def test_universal_d_is_a_derivation():
    for spec in ["trunc_poly:3", "matrix:2"]:
        uc = UniversalCalculus(catalog(spec), cap=1)
        assert uc.leibniz_holds()
        # d(1) = 0
        assert all(x == 0 for x in uc.exact_form_ambient(uc.algebra.unit))


def test_omega1_bimodule_axioms():
    for spec in ["trunc_poly:2", "matrix:2"]:
        uc = UniversalCalculus(catalog(spec), cap=1)
        assert uc.omega1_bimodule().validate().ok


def test_degree_two_and_juxtaposition():
    for spec in ["trunc_poly:2", "trunc_poly:3", "matrix:2"]:
        uc = UniversalCalculus(catalog(spec), cap=2)
        assert uc.juxtaposition_rule_holds(), spec


def test_d_squared_zero_into_degree_two():
    # d(da) = 0: the composite d1 ∘ d0 vanishes
    for spec in ["trunc_poly:3", "matrix:2"]:
        uc = UniversalCalculus(catalog(spec), cap=2)
        assert (uc.d1 @ uc.d0).is_zero()


def test_central_commutation_witness_dual_numbers():
    # x·dx − dx·x = 2 x⊗x in A⊗A for A = Q[x]/(x²); oracle by hand expansion:
    # x(1⊗x − x⊗1) = x⊗x,  (1⊗x − x⊗1)x = −x⊗x
    a2 = trunc_poly(2)
    uc = UniversalCalculus(a2, cap=1)
    w = uc.central_commutation_witness()
    assert w is not None
    n = 2
    expected = [Fraction(0)] * 4
    expected[1 * n + 1] = Fraction(2)  # 2·(x⊗x)
    assert w["difference"] == expected
    # contrast: no witness in a one-dimensional algebra
    assert UniversalCalculus(trunc_poly(1), cap=1).central_commutation_witness() is None


def test_universal_factorization():
    # every derivation-basis element into A and into Ω¹ factors uniquely
    from diffoplab.universal import bimodule_hom_space
    for spec in ["trunc_poly:3", "matrix:2"]:
        a = catalog(spec)
        uc = UniversalCalculus(a, cap=1)
        reg = regular_bimodule(a)
        targets = [reg, uc.omega1_bimodule()]
        for target in targets:
            hom = bimodule_hom_space(uc, target)
            ders = derivations(a, target)
            for u in ders.basis_maps():
                res = universal_factorize(uc, target, u, hom)
                assert res.ok, (spec, target.name)
    # zero derivation gives the zero map
    a = trunc_poly(3)
    uc = UniversalCalculus(a, cap=1)
    reg = regular_bimodule(a)
    res = universal_factorize(uc, reg, Matrix.zeros(QQ, 3, 3))
    assert res.ok and res.f_matrix.is_zero()


def test_factorize_d_itself_gives_identity():
    a = matrix_algebra(2)
    uc = UniversalCalculus(a, cap=1)
    o1 = uc.omega1_bimodule()
    # d as a map A → Ω¹ in Ω¹ coordinates is exactly d0
    res = universal_factorize(uc, o1, uc.d0)
    assert res.ok
    assert res.f_matrix == Matrix.identity(QQ, uc.omega1.dim)


def test_factorize_inner_derivation_m2():
    a = matrix_algebra(2)
    uc = UniversalCalculus(a, cap=1)
    reg = regular_bimodule(a)
    u = inner_derivation(reg, a.basis_vector(1))
    res = universal_factorize(uc, reg, u)
    assert res.ok
    assert (res.f_matrix @ uc.d0) == u


def test_extend_hom_identity():
    a = trunc_poly(2)
    uc = UniversalCalculus(a, cap=2)
    rho = Matrix.identity(QQ, 2)
    res = extend_hom(uc, rho, uc.as_calculus())
    assert res.ok
    assert res.maps[1] == Matrix.identity(QQ, uc.omega1.dim)


def test_extend_hom_to_zero_calculus():
    # x ↦ 0 into the ground field with zero higher degrees kills dx
    a = trunc_poly(2)
    k = trunc_poly(1)
    uc = UniversalCalculus(a, cap=1)
    rho = Matrix.from_rows(QQ, [[1, 0]])
    res = extend_hom(uc, rho, zero_calculus(k))
    assert res.ok
    assert res.maps[1].rows == 0


def test_extend_hom_to_ce_minimal():
    # the canonical surjection onto the center-multilinear calculus
    for spec in ["trunc_poly:3", "matrix:2"]:
        a = catalog(spec)
        uc = UniversalCalculus(a, cap=1)
        mc = MinimalCalculus(a)
        def mul(r, s, x, y, mc=mc, a=a):
            if r == 0 and s == 0:
                return a.multiply(x, y)
            if r == 0 and s == 1:
                amb = mc.one_forms.linear_combination(y)
                der_d = mc.der.dim
                out = []
                for t in range(der_d):
                    out.extend(a.multiply(x, amb[t * a.dim:(t + 1) * a.dim]))
                return mc.one_forms.coords_of(out)
            raise ValueError

        from diffoplab.universal import Calculus
        target = Calculus(a, [a.dim, mc.one_forms.dim], [mc.d0_matrix()], mul)
        rho = Matrix.identity(QQ, a.dim)
        res = extend_hom(uc, rho, target)
        assert res.well_defined and res.intertwining_ok


def test_extend_hom_rejects_non_homomorphism():
    a = trunc_poly(2)
    uc = UniversalCalculus(a, cap=1)
    bad = Matrix.from_rows(QQ, [[1, 1], [0, 1]])  # x ↦ 1+x is not multiplicative
    from diffoplab.algebra import AlgebraError
    with pytest.raises(AlgebraError):
        extend_hom(uc, bad, uc.as_calculus())
