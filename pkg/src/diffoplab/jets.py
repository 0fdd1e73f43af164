"""Jet modules: quotients of tensor ambients that represent operator spaces.

The order-k jet of P is (A ⊗ P)/μ^{k+1}, where μ^{k+1} is the submodule
generated by all (k+1)-fold images of δ^b(x⊗p) = (bx)⊗p − x⊗(bp); the map
J_k(p) = class(1 ⊗ p) is then itself an order-k operator, and composing
with module maps out of the quotient enumerates operators out of P.  The
two-sided first jet does the same inside A ⊗ P ⊗ A with an outer action on
each side.
"""

from __future__ import annotations

from itertools import product

from .algebra import AlgebraError, FiniteAlgebra
from .bimodule import Bimodule, SandwichModule, tensor_algebra_module
from .diffops import dv_first_order
from .homspace import HomSpace, LinMap
from .linalg import (
    Matrix,
    Subspace,
    closure,
    kernel,
    kron,
    quotient_basis,
    solve_affine,
    vstack,
)

JET_ORDER_CAP = 2


class JetModule:
    """A realized jet quotient with its module structures and J map."""

    def __init__(self, algebra, source, order, ambient_dim, mu, proj, reps,
                 left_ops, second_ops, jk, two_sided=False):
        self.algebra = algebra
        self.source = source
        self.order = order
        self.ambient_dim = ambient_dim
        self.mu = mu
        self.proj = proj
        self.reps = reps
        self.left_ops = left_ops
        self.second_ops = second_ops
        self.jk = jk
        self.two_sided = two_sided

    @property
    def dim(self):
        return len(self.reps)

    def quotient_bimodule(self) -> Bimodule:
        kind = "right" if (self.two_sided or self.algebra.is_commutative()) \
            else "left_bullet"
        return Bimodule(self.algebra, self.dim, self.left_ops, self.second_ops,
                        second_kind=kind,
                        name=f"Jet{self.order}({self.source.name})")

    def to_dict(self):
        return {
            "order": self.order,
            "ambient_dim": self.ambient_dim,
            "relations_dim": self.mu.dim,
            "jet_dim": self.dim,
            "two_sided": self.two_sided,
        }


def _quotient_data(field, ambient_dim, mu: Subspace):
    reps = quotient_basis(Subspace.full(field, ambient_dim), mu)
    cols = [list(r) for r in mu.basis] + reps
    big = Matrix(field, [[cols[c][r] for c in range(ambient_dim)]
                         for r in range(ambient_dim)], ambient_dim)
    from .universal import _invert
    inv = _invert(big)
    proj = Matrix(field, inv.data[mu.dim:], ambient_dim)
    lift = Matrix(field, [[reps[c][r] for c in range(len(reps))]
                          for r in range(ambient_dim)], len(reps))
    return reps, proj, lift


def jet_module(algebra: FiniteAlgebra, p: Bimodule, k: int,
               allow_noncommutative: bool = False) -> JetModule:
    """(A ⊗ P)/μ^{k+1} with both quotient structures and the J map.

    Over a noncommutative algebra the construction still makes sense
    verbatim (the second structure is then a commuting left action), but
    the representation property is expected to fail; building it requires
    the explicit flag.
    """
    if k > JET_ORDER_CAP:
        raise AlgebraError(f"jet order {k} exceeds cap {JET_ORDER_CAP}")
    if not algebra.is_commutative() and not allow_noncommutative:
        raise AlgebraError("one-sided jets need a commutative algebra "
                           "(pass allow_noncommutative=True to build anyway)")
    f = algebra.field
    n = algebra.dim
    ambient = tensor_algebra_module(algebra, p)
    deltas = [ambient.left[i] - ambient.right[i] for i in range(n)]
    level = [ambient.basis_vector(i) for i in range(ambient.dim)]
    for _ in range(k + 1):
        level = [d.apply(v) for v in level for d in deltas]
    mu = closure(f, ambient.dim, level, ambient.left + ambient.right)
    reps, proj, lift = _quotient_data(f, ambient.dim, mu)
    left_ops = [proj @ ambient.left[i] @ lift for i in range(n)]
    second_ops = [proj @ ambient.right[i] @ lift for i in range(n)]
    unit_tensor_cols = []
    for l in range(p.dim):
        vec = [f.zero()] * ambient.dim
        for i, u in enumerate(algebra.unit):
            if u != 0:
                vec[i * p.dim + l] = u
        unit_tensor_cols.append(proj.apply(vec))
    jk = Matrix(f, [[unit_tensor_cols[c][r] for c in range(p.dim)]
                    for r in range(len(reps))], p.dim)
    return JetModule(algebra, p, k, ambient.dim, mu, proj, reps,
                     left_ops, second_ops, jk)


def jk_is_diffop(jm: JetModule) -> bool:
    """The canonical map J_k is an order-k operator into the jet module."""
    target = jm.quotient_bimodule()
    hom = HomSpace(jm.source, target)
    return hom.iterated_delta_vanishes(LinMap(jm.source, target, jm.jk), jm.order)


def hom_space_out_of_jet(jm: JetModule, q: Bimodule,
                         bimodule_maps: bool = False) -> Subspace:
    """Module maps from the jet quotient to Q, in flat coordinates.

    With ``bimodule_maps`` the right structures are intertwined as well
    (used by the two-sided jets).
    """
    f = jm.algebra.field
    jd = jm.dim
    mq = q.dim
    eye_j = Matrix.identity(f, jd)
    eye_q = Matrix.identity(f, mq)
    blocks = []
    for i in range(jm.algebra.dim):
        blocks.append(kron(eye_q, jm.left_ops[i].transpose())
                      - kron(q.left[i], eye_j))
        if bimodule_maps:
            blocks.append(kron(eye_q, jm.second_ops[i].transpose())
                          - kron(q.right[i], eye_j))
    return kernel(vstack(blocks))


class JetFactorization:
    def __init__(self, f_matrix, residual_zero, unique):
        self.f_matrix = f_matrix
        self.residual_zero = residual_zero
        self.unique = unique

    @property
    def ok(self):
        return self.residual_zero and self.unique


def factorize(jm: JetModule, q: Bimodule, delta: Matrix,
              hom_space: Subspace = None) -> JetFactorization:
    """Write an order-k operator as (module map out of the jet) ∘ J_k."""
    f = jm.algebra.field
    jd = jm.dim
    mq = q.dim
    if hom_space is None:
        hom_space = hom_space_out_of_jet(jm, q, bimodule_maps=jm.two_sided)
    basis_images = []
    for row in hom_space.basis:
        fmat = Matrix(f, [list(row[r * jd:(r + 1) * jd]) for r in range(mq)], jd)
        basis_images.append(fmat @ jm.jk)
    rows = []
    rhs = []
    for i in range(jm.source.dim):
        for m in range(mq):
            rows.append([img.data[m][i] for img in basis_images])
            rhs.append(delta.data[m][i])
    sol = solve_affine([(Matrix(f, rows, hom_space.dim), rhs)])
    if not sol.consistent:
        return JetFactorization(None, False, False)
    flat = hom_space.linear_combination(sol.point)
    fmat = Matrix(f, [flat[r * jd:(r + 1) * jd] for r in range(mq)], jd)
    residual = (fmat @ jm.jk) - delta
    return JetFactorization(fmat, residual.is_zero(), sol.homogeneous.dim == 0)


def two_sided_jet(algebra: FiniteAlgebra, p: Bimodule) -> JetModule:
    """First-order two-sided jet: (A ⊗ P ⊗ A)/μ¹ with outer actions."""
    f = algebra.field
    n = algebra.dim
    sw = SandwichModule(algebra, p)
    deltas = [sw.bimodule.left[i] - sw.mid_left[i] for i in range(n)]
    bar_deltas = [sw.bimodule.right[i] - sw.mid_right[i] for i in range(n)]
    gens = []
    for l in range(p.dim):
        vec = [f.zero()] * sw.dim
        for i, u in enumerate(algebra.unit):
            if u == 0:
                continue
            for kx, u2 in enumerate(algebra.unit):
                if u2 != 0:
                    vec[sw.flat_index(i, l, kx)] = f.mul(u, u2)
        for b in range(n):
            inner = deltas[b].apply(vec)
            for c in range(n):
                gens.append(bar_deltas[c].apply(inner))
    mu = closure(f, sw.dim, gens, sw.bimodule.left + sw.bimodule.right)
    reps, proj, lift = _quotient_data(f, sw.dim, mu)
    left_ops = [proj @ sw.bimodule.left[i] @ lift for i in range(n)]
    right_ops = [proj @ sw.bimodule.right[i] @ lift for i in range(n)]
    jk_cols = []
    for l in range(p.dim):
        vec = [f.zero()] * sw.dim
        for i, u in enumerate(algebra.unit):
            if u == 0:
                continue
            for kx, u2 in enumerate(algebra.unit):
                if u2 != 0:
                    vec[sw.flat_index(i, l, kx)] = f.mul(u, u2)
        jk_cols.append(proj.apply(vec))
    jk = Matrix(f, [[jk_cols[c][r] for c in range(p.dim)]
                    for r in range(len(reps))], p.dim)
    return JetModule(algebra, p, 1, sw.dim, mu, proj, reps,
                     left_ops, right_ops, jk, two_sided=True)


def two_sided_representability(jm: JetModule, q: Bimodule) -> dict:
    """dim Hom_{A-A}(jet, Q) versus the bimodule first-order operator space,
    with the two explicit correspondences checked to invert each other."""
    if not jm.two_sided:
        raise ValueError("needs a two-sided jet")
    hom = hom_space_out_of_jet(jm, q, bimodule_maps=True)
    dv = dv_first_order(jm.source, q)
    f = jm.algebra.field
    jd = jm.dim
    mq = q.dim
    forward_ok = True
    for row in hom.basis:
        fmat = Matrix(f, [list(row[r * jd:(r + 1) * jd]) for r in range(mq)], jd)
        composed = fmat @ jm.jk
        if not dv.space.contains([x for r in composed.data for x in r]):
            forward_ok = False
    backward_ok = True
    for row in dv.space.basis:
        mp = jm.source.dim
        delta = Matrix(f, [list(row[r * mp:(r + 1) * mp]) for r in range(mq)], mp)
        fact = factorize(jm, q, delta, hom_space=hom)
        if not fact.ok:
            backward_ok = False
    return {
        "hom_dim": hom.dim,
        "operator_dim": dv.dim,
        "dims_equal": hom.dim == dv.dim,
        "forward_ok": forward_ok,
        "backward_ok": backward_ok,
        "ok": hom.dim == dv.dim and forward_ok and backward_ok,
    }


def left_jet_identity_witness(algebra: FiniteAlgebra, p: Bimodule, k: int = 1):
    """A module map f out of A ⊗ P together with (b_0, b_1, p) where the
    iterated-delta compatibility of f∘J with f∘(the ambient deltas) breaks.

    Over a commutative algebra the two sides agree identically; over a
    noncommutative one the mismatch is f(1 ⊗ (b_1 b_0 − b_0 b_1)p), and the
    first nonzero instance over a basis of left-linear maps is returned.
    """
    if k != 1:
        raise ValueError("the identity check is materialized at order 1")
    f = algebra.field
    n = algebra.dim
    ambient = tensor_algebra_module(algebra, p)
    # left-linear maps f: A⊗P → A, i.e. f ∘ L(b) = L_A(b) ∘ f
    eye_amb = Matrix.identity(f, ambient.dim)
    eye_a = Matrix.identity(f, n)
    blocks = [kron(eye_a, ambient.left[i].transpose())
              - kron(algebra.left_mult_basis(i), eye_amb) for i in range(n)]
    maps = kernel(vstack(blocks))
    deltas = [ambient.left[i] - ambient.right[i] for i in range(n)]
    for row in maps.basis:
        fmat = Matrix(f, [list(row[r * ambient.dim:(r + 1) * ambient.dim])
                          for r in range(n)], ambient.dim)
        cols = []
        for l in range(p.dim):
            vec = [f.zero()] * ambient.dim
            for i, u in enumerate(algebra.unit):
                if u != 0:
                    vec[i * p.dim + l] = u
            cols.append(fmat.apply(vec))
        fj = Matrix(f, [[cols[c][r] for c in range(p.dim)] for r in range(n)],
                    p.dim)
        for b0, b1 in product(range(n), repeat=2):
            lhs = (algebra.left_mult_basis(b0) @ algebra.left_mult_basis(b1) @ fj
                   - algebra.left_mult_basis(b0) @ fj @ p.left[b1]
                   - algebra.left_mult_basis(b1) @ fj @ p.left[b0]
                   + fj @ p.left[b1] @ p.left[b0])
            for l in range(p.dim):
                vec = [f.zero()] * ambient.dim
                for i, u in enumerate(algebra.unit):
                    if u != 0:
                        vec[i * p.dim + l] = u
                img = deltas[b1].apply(vec)
                img = deltas[b0].apply(img)
                rhs_col = fmat.apply(img)
                if lhs.col(l) != rhs_col:
                    diff = [f.sub(x, y) for x, y in zip(lhs.col(l), rhs_col)]
                    return {"b0": b0, "b1": b1, "p": l,
                            "difference": [f.fmt(x) for x in diff]}
    return None
