from itertools import product

import pytest

from diffoplab.algebra import AlgebraError, catalog, matrix_algebra, trunc_poly
from diffoplab.bimodule import free_module, regular_bimodule
from diffoplab.diffops import dv_first_order, grothendieck_diff
from diffoplab.fields import QQ
from diffoplab.homspace import LinMap
from diffoplab.jets import (
    factorize,
    hom_space_out_of_jet,
    jet_module,
    jk_is_diffop,
    left_jet_identity_witness,
    two_sided_jet,
    two_sided_representability,
)
from diffoplab.linalg import Matrix


def test_order_zero_jet_collapses_to_module():
    for spec in ["trunc_poly:2", "trunc_poly:3", "group_z:3"]:
        a = catalog(spec)
        reg = regular_bimodule(a)
        jm = jet_module(a, reg, 0)
        assert jm.dim == reg.dim
        # J_0 is an isomorphism: explicit mutually inverse maps
        from diffoplab.linalg import rank
        assert rank(jm.jk) == reg.dim
        from diffoplab.universal import _invert
        inv = _invert(jm.jk)
        assert inv @ jm.jk == Matrix.identity(QQ, reg.dim)
        assert jk_is_diffop(jm)


def test_first_jet_relation_instance():
    # 1⊗(abp) − a⊗(bp) − b⊗(ap) + ab⊗p lies in the order-1 relations
    a = trunc_poly(2)
    reg = regular_bimodule(a)
    jm = jet_module(a, reg, 1)
    n = a.dim
    f = a.field
    for ai, bi, pi in product(range(n), repeat=3):
        vec = [f.zero()] * jm.ambient_dim
        abp = a.multiply(a.sc[ai][bi], a.basis_vector(pi))
        bp = a.multiply(a.basis_vector(bi), a.basis_vector(pi))
        ap = a.multiply(a.basis_vector(ai), a.basis_vector(pi))
        ab = a.sc[ai][bi]
        for i, u in enumerate(a.unit):
            if u != 0:
                for m, c in enumerate(abp):
                    if c != 0:
                        vec[i * n + m] = f.add(vec[i * n + m], f.mul(u, c))
        for m, c in enumerate(bp):
            if c != 0:
                vec[ai * n + m] = f.sub(vec[ai * n + m], c)
        for m, c in enumerate(ap):
            if c != 0:
                vec[bi * n + m] = f.sub(vec[bi * n + m], c)
        for i, c in enumerate(ab):
            if c != 0:
                vec[i * n + pi] = f.add(vec[i * n + pi], c)
        assert jm.mu.contains(vec)


def test_jk_is_diffop_orders():
    a3 = trunc_poly(3)
    reg = regular_bimodule(a3)
    jm1 = jet_module(a3, reg, 1)
    assert jk_is_diffop(jm1)
    a2 = trunc_poly(2)
    jm2 = jet_module(a2, regular_bimodule(a2), 2)
    assert jk_is_diffop(jm2)


def test_representability_dimension_identity():
    # dim Diff_k(P, Q) = dim Hom_A(J^k(P), Q), both sides independently
    a = trunc_poly(3)
    reg = regular_bimodule(a)
    two = free_module(a, 2)
    for k in (0, 1, 2):
        for p in (reg, two):
            jm = jet_module(a, p, k)
            for q in (reg, two):
                hom = hom_space_out_of_jet(jm, q)
                g = grothendieck_diff(p, q, k)
                assert hom.dim == g.dim, (k, p.name, q.name)
                # forward direction: every module map out of the jet gives
                # an operator of order k
                for row in hom.basis:
                    jd, mq = jm.dim, q.dim
                    fmat = Matrix(QQ, [list(row[r * jd:(r + 1) * jd])
                                       for r in range(mq)], jd)
                    composed = fmat @ jm.jk
                    assert g.space.contains(
                        [x for rr in composed.data for x in rr])


def test_factorization_residual_and_uniqueness():
    a = trunc_poly(3)
    reg = regular_bimodule(a)
    jm = jet_module(a, reg, 1)
    g1 = grothendieck_diff(reg, reg, 1)
    hom = hom_space_out_of_jet(jm, reg)
    for row in g1.space.basis:
        delta = Matrix(QQ, [list(row[r * 3:(r + 1) * 3]) for r in range(3)], 3)
        res = factorize(jm, reg, delta, hom_space=hom)
        assert res.ok
    # an operator of too-high order cannot factor: d/dx is not order 1 here
    ddx = Matrix.from_rows(QQ, [[0, 1, 0], [0, 0, 2], [0, 0, 0]])
    res = factorize(jm, reg, ddx, hom_space=hom)
    assert not res.residual_zero or not res.unique


def test_zero_order_factorization_identity():
    a = trunc_poly(2)
    reg = regular_bimodule(a)
    jm = jet_module(a, reg, 0)
    mulx = LinMap(reg, reg, a.left_mult(a.basis_vector(1)))
    res = factorize(jm, reg, mulx.matrix)
    assert res.ok


def test_jet_requires_commutative_by_default():
    m2 = matrix_algebra(2)
    with pytest.raises(AlgebraError):
        jet_module(m2, regular_bimodule(m2), 1)
    jm = jet_module(m2, regular_bimodule(m2), 1, allow_noncommutative=True)
    assert jm.dim >= 0


def test_left_jet_identity_fails_noncommutative():
    m2 = matrix_algebra(2)
    w = left_jet_identity_witness(m2, regular_bimodule(m2))
    assert w is not None
    assert any(x != "0" for x in w["difference"])
    # and holds on a commutative algebra
    a3 = trunc_poly(3)
    assert left_jet_identity_witness(a3, regular_bimodule(a3)) is None


def test_two_sided_jet_zero_module():
    a = trunc_poly(2)
    zero = free_module(a, 1)
    # zero module: build an honest rank-0 module by hand
    from diffoplab.bimodule import Bimodule
    z = Bimodule(a, 0, [Matrix.zeros(QQ, 0, 0)] * 2, [Matrix.zeros(QQ, 0, 0)] * 2,
                 name="zero")
    jm = two_sided_jet(a, z)
    assert jm.dim == 0


def test_two_sided_jet_commutative_matches_dv_dimension():
    a = trunc_poly(3)
    reg = regular_bimodule(a)
    jm = two_sided_jet(a, reg)
    rep = two_sided_representability(jm, reg)
    assert rep["ok"]
    assert rep["hom_dim"] == dv_first_order(reg, reg).dim


def test_two_sided_jet_m2_representability():
    m2 = matrix_algebra(2)
    reg = regular_bimodule(m2)
    jm = two_sided_jet(m2, reg)
    rep = two_sided_representability(jm, reg)
    assert rep["ok"]
    assert rep["operator_dim"] == 7
