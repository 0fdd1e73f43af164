"""The universal differential calculus: one-forms inside A ⊗ A.

Ω¹ is the sub-bimodule of A ⊗ A generated by the elements 1⊗a − a⊗1 (it
coincides with the kernel of the multiplication map, which is verified,
not assumed), with the derivation d(a) = 1⊗a − a⊗1.  Degree 2 is realized
as the balanced tensor square Ω¹ ⊗_A Ω¹, a quotient by the middle-action
relations.  Every derivation into a bimodule factors through d by a unique
bimodule map; algebra maps extend to calculus morphisms degree by degree.
"""

from __future__ import annotations

from itertools import product

from .algebra import AlgebraError, FiniteAlgebra
from .bimodule import Bimodule
from .linalg import (
    Matrix,
    Subspace,
    closure,
    kernel,
    kron,
    quotient_basis,
    restrict_operator,
    solve_affine,
    vstack,
)


class Calculus:
    """A differential calculus truncated at degree 2: spaces, products, d.

    ``dims[k]`` is the coordinate dimension of degree k; ``d[k]`` maps
    degree k to k+1; ``mul(r, s, x, y)`` multiplies coordinates.
    """

    def __init__(self, algebra, dims, d_mats, mul):
        self.algebra = algebra
        self.dims = dims
        self.d = d_mats
        self._mul = mul

    def mul(self, r, s, x, y):
        return self._mul(r, s, x, y)


def zero_calculus(algebra: FiniteAlgebra) -> Calculus:
    """The calculus that is the algebra in degree 0 and zero above."""
    f = algebra.field
    n = algebra.dim

    def mul(r, s, x, y):
        if r == 0 and s == 0:
            return algebra.multiply(x, y)
        return []

    return Calculus(algebra, [n, 0, 0],
                    [Matrix.zeros(f, 0, n), Matrix.zeros(f, 0, 0)], mul)


class UniversalCalculus:
    """Ω⁰ = A, Ω¹ ⊂ A⊗A, Ω² = Ω¹ ⊗_A Ω¹, with d and the products."""

    def __init__(self, algebra: FiniteAlgebra, cap: int = 2):
        if cap < 1 or cap > 2:
            raise ValueError("universal calculus is materialized at degrees 1..2")
        self.algebra = algebra
        self.cap = cap
        f = algebra.field
        n = algebra.dim
        eye = Matrix.identity(f, n)
        self.amb_left = [kron(algebra.left_mult_basis(i), eye) for i in range(n)]
        self.amb_right = [kron(eye, algebra.right_mult_basis(i)) for i in range(n)]
        gens = [self.exact_form_ambient(algebra.basis_vector(i)) for i in range(n)]
        self.omega1 = closure(f, n * n, gens, self.amb_left + self.amb_right)
        self.left1 = [restrict_operator(m, self.omega1) for m in self.amb_left]
        self.right1 = [restrict_operator(m, self.omega1) for m in self.amb_right]
        d0_cols = [self.omega1.coords_of(g) for g in gens]
        self.d0 = Matrix(f, [[d0_cols[j][i] for j in range(n)]
                             for i in range(self.omega1.dim)], n)
        if cap >= 2:
            self._build_degree2()

    # -- degree 1 ---------------------------------------------------------------

    def exact_form_ambient(self, a_coords):
        """1⊗a − a⊗1 as a flat A⊗A vector."""
        f = self.algebra.field
        n = self.algebra.dim
        unit = self.algebra.unit
        out = [f.zero()] * (n * n)
        for j, c in enumerate(a_coords):
            if c == 0:
                continue
            for i, u in enumerate(unit):
                if u != 0:
                    out[i * n + j] = f.add(out[i * n + j], f.mul(u, c))
                    out[j * n + i] = f.sub(out[j * n + i], f.mul(u, c))
        return out

    def d0_coords(self, a_coords):
        return self.d0.apply(list(a_coords))

    def multiplication_matrix(self) -> Matrix:
        """m: A⊗A → A, e_i⊗e_j ↦ e_i e_j."""
        n = self.algebra.dim
        f = self.algebra.field
        cols = []
        for i in range(n):
            for j in range(n):
                cols.append(self.algebra.sc[i][j])
        return Matrix(f, [[cols[c][r] for c in range(n * n)] for r in range(n)],
                      n * n)

    def omega1_equals_multiplication_kernel(self) -> bool:
        return self.omega1 == kernel(self.multiplication_matrix())

    def omega1_bimodule(self) -> Bimodule:
        return Bimodule(self.algebra, self.omega1.dim, self.left1, self.right1,
                        name=f"Omega1({self.algebra.name})")

    def leibniz_holds(self) -> bool:
        """d(ab) = da·b + a·db on all basis pairs, in ambient coordinates."""
        n = self.algebra.dim
        for i, j in product(range(n), repeat=2):
            dab = self.exact_form_ambient(self.algebra.sc[i][j])
            da = self.exact_form_ambient(self.algebra.basis_vector(i))
            db = self.exact_form_ambient(self.algebra.basis_vector(j))
            rhs_da_b = self.amb_right[j].apply(da)
            rhs_a_db = self.amb_left[i].apply(db)
            f = self.algebra.field
            rhs = [f.add(x, y) for x, y in zip(rhs_da_b, rhs_a_db)]
            if dab != rhs:
                return False
        return True

    # -- degree 2 ---------------------------------------------------------------

    def _build_degree2(self):
        f = self.algebra.field
        n = self.algebra.dim
        t = self.omega1.dim
        rel_vecs = []
        for a_i in range(n):
            r1 = self.right1[a_i]
            l1 = self.left1[a_i]
            for wi in range(t):
                w = [f.one() if x == wi else f.zero() for x in range(t)]
                rw = r1.apply(w)
                lw = None
                for ei in range(t):
                    e = [f.one() if x == ei else f.zero() for x in range(t)]
                    le = l1.apply(e)
                    vec = [f.zero()] * (t * t)
                    for x, c in enumerate(rw):
                        if c != 0:
                            vec[x * t + ei] = f.add(vec[x * t + ei], c)
                    for y, c in enumerate(le):
                        if c != 0:
                            vec[wi * t + y] = f.sub(vec[wi * t + y], c)
                    rel_vecs.append(vec)
        self.middle_relations = Subspace.from_spanning(f, t * t, rel_vecs)
        reps = quotient_basis(Subspace.full(f, t * t), self.middle_relations)
        q2 = len(reps)
        self.omega2_dim = q2
        cols = [list(r) for r in self.middle_relations.basis] + reps
        big = Matrix(f, [[cols[c][r] for c in range(t * t)] for r in range(t * t)],
                     t * t)
        inv = _invert(big)
        mu = self.middle_relations.dim
        self.proj2 = Matrix(f, inv.data[mu:], t * t)
        self.reps2 = reps
        # d1 on basis vectors of Ω¹ via their ambient A⊗A coordinates:
        # Σ x_{ij} e_i d e_j  ↦  Σ x_{ij} d e_i · d e_j
        des = [self.omega1.coords_of(
            self.exact_form_ambient(self.algebra.basis_vector(i)))
            for i in range(n)]
        d1_cols = []
        for row in self.omega1.basis:
            acc = [f.zero()] * q2
            for i in range(n):
                for j in range(n):
                    x = row[i * n + j]
                    if x == 0:
                        continue
                    term = self.mu11(des[i], des[j])
                    for m in range(q2):
                        if term[m] != 0:
                            acc[m] = f.add(acc[m], f.mul(x, term[m]))
            d1_cols.append(acc)
        self.d1 = Matrix(f, [[d1_cols[j][i] for j in range(self.omega1.dim)]
                             for i in range(q2)], self.omega1.dim)

    def mu11(self, w_coords, e_coords):
        """Product Ω¹ × Ω¹ → Ω² in quotient coordinates."""
        f = self.algebra.field
        t = self.omega1.dim
        vec = [f.zero()] * (t * t)
        for x, a in enumerate(w_coords):
            if a == 0:
                continue
            for y, b in enumerate(e_coords):
                if b != 0:
                    vec[x * t + y] = f.mul(a, b)
        return self.proj2.apply(vec)

    def left2(self, a_coords, w2):
        """a · (class of ω⊗η) = class of (aω)⊗η."""
        f = self.algebra.field
        t = self.omega1.dim
        l1 = Matrix.zeros(f, t, t)
        for i, c in enumerate(a_coords):
            if c != 0:
                l1 = l1 + self.left1[i].scale(c)
        lifted = [f.zero()] * (t * t)
        for ri, rep in enumerate(self.reps2):
            if w2[ri] != 0:
                for x in range(t * t):
                    if rep[x] != 0:
                        lifted[x] = f.add(lifted[x], f.mul(w2[ri], rep[x]))
        t2 = [f.zero()] * (t * t)
        for x in range(t):
            row_slice = lifted[x * t:(x + 1) * t]
            if all(v == 0 for v in row_slice):
                continue
            for x2 in range(t):
                c = l1.data[x2][x]
                if c != 0:
                    for y in range(t):
                        if row_slice[y] != 0:
                            t2[x2 * t + y] = f.add(t2[x2 * t + y],
                                                   f.mul(c, row_slice[y]))
        return self.proj2.apply(t2)

    # -- identities ---------------------------------------------------------------

    def juxtaposition_rule_holds(self) -> bool:
        """(a₀da₁)(b₀db₁) = a₀d(a₁b₀)db₁ − a₀a₁db₀db₁ in Ω²."""
        if self.cap < 2:
            raise ValueError("needs degree 2")
        alg = self.algebra
        f = alg.field
        n = alg.dim
        des = [self.d0_coords(alg.basis_vector(i)) for i in range(n)]
        for a0, a1, b0, b1 in product(range(n), repeat=4):
            lhs_left = self._left1_coords(alg.basis_vector(a0), des[a1])
            lhs_right = self._left1_coords(alg.basis_vector(b0), des[b1])
            lhs = self.mu11(lhs_left, lhs_right)
            term1 = self.mu11(
                self._left1_coords(alg.basis_vector(a0),
                                   self.d0.apply(alg.sc[a1][b0])),
                des[b1])
            a0a1 = alg.multiply(alg.basis_vector(a0), alg.basis_vector(a1))
            term2 = self.mu11(self._left1_coords(a0a1, des[b0]), des[b1])
            rhs = [f.sub(x, y) for x, y in zip(term1, term2)]
            if lhs != rhs:
                return False
        return True

    def _left1_coords(self, a_coords, w_coords):
        f = self.algebra.field
        out = [f.zero()] * self.omega1.dim
        for i, c in enumerate(a_coords):
            if c != 0:
                img = self.left1[i].apply(w_coords)
                out = [f.add(x, f.mul(c, y)) for x, y in zip(out, img)]
        return out

    def _right1_coords(self, w_coords, a_coords):
        f = self.algebra.field
        out = [f.zero()] * self.omega1.dim
        for i, c in enumerate(a_coords):
            if c != 0:
                img = self.right1[i].apply(w_coords)
                out = [f.add(x, f.mul(c, y)) for x, y in zip(out, img)]
        return out

    def central_commutation_witness(self):
        """Central a, a' with a·da' ≠ da'·a, or None after exhaustive search.

        Returns (a_index, aprime_index, difference in ambient coords).
        """
        alg = self.algebra
        f = alg.field
        n = alg.dim
        center = alg.center()
        eye = Matrix.identity(f, n)
        for z in center.basis:
            left = kron(alg.left_mult(list(z)), eye)
            right = kron(eye, alg.right_mult(list(z)))
            for zp in center.basis:
                da = self.exact_form_ambient(list(zp))
                diff = [f.sub(x, y) for x, y in
                        zip(left.apply(da), right.apply(da))]
                if any(x != 0 for x in diff):
                    return {"central": list(z), "argument": list(zp),
                            "difference": diff}
        return None

    def as_calculus(self) -> Calculus:
        f = self.algebra.field

        def mul(r, s, x, y):
            if r == 0 and s == 0:
                return self.algebra.multiply(x, y)
            if r == 0 and s == 1:
                return self._left1_coords(x, y)
            if r == 1 and s == 0:
                return self._right1_coords(x, y)
            if r == 1 and s == 1:
                return self.mu11(x, y)
            if r == 0 and s == 2:
                return self.left2(x, y)
            raise ValueError(f"product at degrees ({r},{s}) not materialized")

        dims = [self.algebra.dim, self.omega1.dim]
        d_mats = [self.d0]
        if self.cap >= 2:
            dims.append(self.omega2_dim)
            d_mats.append(self.d1)
        return Calculus(self.algebra, dims, d_mats, mul)


def _invert(m: Matrix) -> Matrix:
    """Inverse via elimination on the augmented block."""
    f = m.field
    nn = m.rows
    aug = Matrix(f, [list(r) + list(e) for r, e in
                     zip(m.data, Matrix.identity(f, nn).data)], 2 * nn)
    from .linalg import rref
    red = rref(aug)
    for i in range(nn):
        if red.data[i][i] != f.one():
            raise ValueError("matrix is singular")
    return Matrix(f, [r[nn:] for r in red.data[:nn]], nn)


class FactorizationResult:
    def __init__(self, f_matrix, residual_zero, unique):
        self.f_matrix = f_matrix
        self.residual_zero = residual_zero
        self.unique = unique

    @property
    def ok(self):
        return self.residual_zero and self.unique


def bimodule_hom_space(uc: UniversalCalculus, target: Bimodule) -> Subspace:
    """Hom_{A-A}(Ω¹, target) in flat (dim target)×(dim Ω¹) coordinates."""
    alg = uc.algebra
    f = alg.field
    t = uc.omega1.dim
    mp = target.dim
    eye_t = Matrix.identity(f, t)
    eye_p = Matrix.identity(f, mp)
    blocks = []
    for i in range(alg.dim):
        blocks.append(kron(eye_p, uc.left1[i].transpose())
                      - kron(target.left[i], eye_t))
        blocks.append(kron(eye_p, uc.right1[i].transpose())
                      - kron(target.right[i], eye_t))
    return kernel(vstack(blocks))


def universal_factorize(uc: UniversalCalculus, target: Bimodule,
                        derivation: Matrix,
                        hom_space: Subspace = None) -> FactorizationResult:
    """Factor a target-valued derivation through d as a bimodule map on Ω¹.

    Solves f(d a) = Δ(a) inside Hom_{A-A}(Ω¹, target); the system must be
    consistent (universality) with a unique solution (Ω¹ is generated by
    the exact forms).  Pass a precomputed ``hom_space`` when factoring many
    derivations into one target.
    """
    alg = uc.algebra
    f = alg.field
    n = alg.dim
    t = uc.omega1.dim
    mp = target.dim
    if hom_space is None:
        hom_space = bimodule_hom_space(uc, target)
    h = hom_space.dim
    # generator conditions in hom-space coordinates: for each basis a and
    # output coordinate, sum_r alpha_r (H_r @ d0)[m][i] = Δ[m][i]
    basis_images = []
    for row in hom_space.basis:
        hmat = Matrix(f, [list(row[r * t:(r + 1) * t]) for r in range(mp)], t)
        basis_images.append(hmat @ uc.d0)
    rows = []
    rhs = []
    for i in range(n):
        for m in range(mp):
            rows.append([basis_images[r].data[m][i] for r in range(h)])
            rhs.append(derivation.data[m][i])
    sol = solve_affine([(Matrix(f, rows, h), rhs)])
    if not sol.consistent:
        return FactorizationResult(None, False, False)
    flat = hom_space.linear_combination(sol.point)
    fmat = Matrix(f, [flat[r * t:(r + 1) * t] for r in range(mp)], t)
    residual = (fmat @ uc.d0) - derivation
    return FactorizationResult(fmat, residual.is_zero(), sol.homogeneous.dim == 0)


class ExtensionResult:
    def __init__(self, maps, intertwining_ok, well_defined):
        self.maps = maps
        self.intertwining_ok = intertwining_ok
        self.well_defined = well_defined

    @property
    def ok(self):
        return self.intertwining_ok and self.well_defined


def extend_hom(uc: UniversalCalculus, rho: Matrix, target: Calculus) -> ExtensionResult:
    """Extend an algebra map to a degree-wise calculus morphism.

    ρ*(a₀ da₁ ⋯ da_k) = ρ(a₀)·d'ρ(a₁)⋯d'ρ(a_k), built by solving on a
    spanning family (well-definedness = consistency of the solve) and
    verified to intertwine the differentials.
    """
    alg = uc.algebra
    f = alg.field
    n = alg.dim
    if not _is_algebra_map(alg, target.algebra, rho):
        raise AlgebraError("map is not a unital algebra homomorphism")
    maps = [rho]
    # degree 1 on the spanning family e_i d e_j
    t = uc.omega1.dim
    span_vecs = []
    values = []
    des = [uc.d0.col(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            span_vecs.append(uc._left1_coords(alg.basis_vector(i), des[j]))
            dv = target.d[0].apply(rho.col(j))
            values.append(target.mul(0, 1, rho.col(i), dv))
    m1, ok1 = _solve_linear_map(f, t, target.dims[1], span_vecs, values)
    maps.append(m1)
    well = ok1
    inter = m1 is not None and (m1 @ uc.d0) == (target.d[0] @ rho)
    if uc.cap >= 2 and len(target.d) >= 2 and m1 is not None:
        span2 = []
        values2 = []
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    w = uc.mu11(uc._left1_coords(alg.basis_vector(i), des[j]),
                                des[k])
                    span2.append(w)
                    dvj = target.d[0].apply(rho.col(j))
                    dvk = target.d[0].apply(rho.col(k))
                    val = target.mul(1, 1, target.mul(0, 1, rho.col(i), dvj), dvk)
                    values2.append(val)
        m2, ok2 = _solve_linear_map(f, uc.omega2_dim, target.dims[2], span2, values2)
        maps.append(m2)
        well = well and ok2
        if m2 is not None:
            inter = inter and (m2 @ uc.d1) == (target.d[1] @ m1)
    return ExtensionResult(maps, inter, well)


def _solve_linear_map(f, src_dim, dst_dim, span_vecs, values):
    """Least linear map sending each spanning vector to its value."""
    rows = []
    rhs = []
    for v, val in zip(span_vecs, values):
        for m in range(dst_dim):
            row = [f.zero()] * (dst_dim * src_dim)
            for c in range(src_dim):
                if v[c] != 0:
                    row[m * src_dim + c] = v[c]
            rows.append(row)
            rhs.append(val[m] if val else f.zero())
    if not rows:
        return Matrix.zeros(f, dst_dim, src_dim), True
    sol = solve_affine([(Matrix(f, rows, dst_dim * src_dim), rhs)])
    if not sol.consistent:
        return None, False
    return Matrix(f, [sol.point[r * src_dim:(r + 1) * src_dim]
                      for r in range(dst_dim)], src_dim), True


def _is_algebra_map(src: FiniteAlgebra, dst: FiniteAlgebra, rho: Matrix) -> bool:
    if rho.apply(list(src.unit)) != list(dst.unit):
        return False
    for i, j in product(range(src.dim), repeat=2):
        lhs = rho.apply(src.sc[i][j])
        rhs = dst.multiply(rho.col(i), rho.col(j))
        if lhs != rhs:
            return False
    return True
