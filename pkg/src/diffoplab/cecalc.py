"""Chevalley–Eilenberg differential calculus over a (not necessarily
commutative) algebra.

Degree-k forms are center-multilinear alternating maps from k-tuples of
derivations to the algebra, stored as flat vectors indexed by (basis tuple,
value coordinate).  The coboundary is the usual alternating sum

    dφ(u_0..u_k) = Σ (−1)^i u_i(φ(..û_i..)) + Σ (−1)^{i+j} φ([u_i,u_j],..û_i..û_j..)

and the product is the shuffle wedge.  The minimal calculus is the
bimodule-and-wedge closure of the exact one-forms.
"""

from __future__ import annotations

from itertools import combinations, product

from .algebra import FiniteAlgebra
from .bimodule import Bimodule, regular_bimodule
from .derivations import DerivationSpace, derivations, lie_bracket
from .linalg import Matrix, Subspace, closure, kernel, kron, restrict_operator, vstack

DEGREE_CAP = 3


class DegreeCapError(ValueError):
    pass


class FormSpace:
    """Alternating center-multilinear k-forms on the derivation module."""

    def __init__(self, algebra: FiniteAlgebra, der: DerivationSpace, degree: int,
                 space: Subspace):
        self.algebra = algebra
        self.der = der
        self.degree = degree
        self.space = space

    @property
    def dim(self):
        return self.space.dim

    @property
    def ambient_dim(self):
        return self.algebra.dim * (self.der.dim ** self.degree)

    def tuple_index(self, t) -> int:
        d = self.der.dim
        idx = 0
        for x in t:
            idx = idx * d + x
        return idx

    def value_at(self, flat, t):
        """φ(u_{t_0}, …) as algebra coordinates, basis tuple arguments."""
        n = self.algebra.dim
        base = self.tuple_index(t) * n
        return flat[base:base + n]

    def evaluate(self, flat, args):
        """Multilinear evaluation at arbitrary derivation-coordinate tuples."""
        n = self.algebra.dim
        d = self.der.dim
        f = self.algebra.field
        out = [f.zero()] * n
        for t in product(range(d), repeat=self.degree):
            coeff = f.one()
            for slot, arg in zip(t, args):
                coeff = f.mul(coeff, arg[slot])
                if coeff == 0:
                    break
            if coeff == 0:
                continue
            val = self.value_at(flat, t)
            for m in range(n):
                if val[m] != 0:
                    out[m] = f.add(out[m], f.mul(coeff, val[m]))
        return out

    def contains(self, flat) -> bool:
        return self.space.contains(flat)


def _center_action_coords(algebra, der):
    """Coordinates of z·u_t in the derivation basis, per center basis z."""
    out = []
    for z in algebra.center().basis:
        lz = algebra.left_mult(list(z))
        row = []
        for u in der.basis_maps():
            zu = lz @ u
            row.append(der.coords_of(zu))
        out.append(row)
    return out


def ce_forms(algebra: FiniteAlgebra, degree: int,
             der: DerivationSpace = None, cap: int = DEGREE_CAP) -> FormSpace:
    """Solve the alternating + center-linearity constraints at one degree."""
    if degree > cap:
        raise DegreeCapError(f"degree {degree} exceeds cap {cap}")
    if der is None:
        der = derivations(algebra, regular_bimodule(algebra))
    n = algebra.dim
    d = der.dim
    f = algebra.field
    if degree == 0:
        return FormSpace(algebra, der, 0, Subspace.full(f, n))
    ambient = n * (d ** degree)
    fs = FormSpace(algebra, der, degree, Subspace.full(f, ambient))
    rows = []
    # alternating: adjacent swaps negate; repeated adjacent arguments vanish
    for t in product(range(d), repeat=degree):
        ti = fs.tuple_index(t)
        for s in range(degree - 1):
            if t[s] == t[s + 1]:
                for m in range(n):
                    row = [f.zero()] * ambient
                    row[ti * n + m] = f.one()
                    rows.append(row)
            elif t[s] < t[s + 1]:
                swapped = list(t)
                swapped[s], swapped[s + 1] = swapped[s + 1], swapped[s]
                si = fs.tuple_index(swapped)
                for m in range(n):
                    row = [f.zero()] * ambient
                    row[ti * n + m] = f.one()
                    row[si * n + m] = f.add(row[si * n + m], f.one())
                    rows.append(row)
    # center-multilinearity in every slot
    z_coords = _center_action_coords(algebra, der)
    z_mults = [algebra.left_mult(list(z)) for z in algebra.center().basis]
    for zi, zrow in enumerate(z_coords):
        lz = z_mults[zi]
        for t in product(range(d), repeat=degree):
            ti = fs.tuple_index(t)
            for s in range(degree):
                for m in range(n):
                    row = [f.zero()] * ambient
                    for r, c in enumerate(zrow[t[s]]):
                        if c != 0:
                            replaced = list(t)
                            replaced[s] = r
                            ri = fs.tuple_index(replaced)
                            row[ri * n + m] = f.add(row[ri * n + m], c)
                    for m2 in range(n):
                        if lz.data[m][m2] != 0:
                            row[ti * n + m2] = f.sub(row[ti * n + m2], lz.data[m][m2])
                    rows.append(row)
    space = kernel(Matrix(f, rows, ambient)) if rows else Subspace.full(f, ambient)
    return FormSpace(algebra, der, degree, space)


def ce_coboundary_matrix(algebra: FiniteAlgebra, der: DerivationSpace,
                         degree: int) -> Matrix:
    """Ambient coboundary: multilinear k-cochains to (k+1)-cochains."""
    n = algebra.dim
    d = der.dim
    f = algebra.field
    rows_dim = n * (d ** (degree + 1))
    cols_dim = n * (d ** degree)
    maps = der.basis_maps()
    bracket_coords = [[der.coords_of(lie_bracket(maps[i], maps[j]))
                       for j in range(d)] for i in range(d)]
    fs_in = FormSpace(algebra, der, degree, Subspace.full(f, cols_dim))
    fs_out = FormSpace(algebra, der, degree + 1, Subspace.full(f, rows_dim))
    out = [[f.zero()] * cols_dim for _ in range(rows_dim)]
    for t in product(range(d), repeat=degree + 1):
        ti = fs_out.tuple_index(t)
        for i in range(degree + 1):
            omit = t[:i] + t[i + 1:]
            oi = fs_in.tuple_index(omit)
            sign = 1 if i % 2 == 0 else -1
            u = maps[t[i]]
            for m in range(n):
                for m2 in range(n):
                    v = u.data[m][m2]
                    if v != 0:
                        v = v if sign > 0 else f.neg(v)
                        out[ti * n + m][oi * n + m2] = f.add(
                            out[ti * n + m][oi * n + m2], v)
        for i in range(degree + 1):
            for j in range(i + 1, degree + 1):
                rest = tuple(x for s, x in enumerate(t) if s not in (i, j))
                sign = 1 if (i + j) % 2 == 0 else -1
                for r, c in enumerate(bracket_coords[t[i]][t[j]]):
                    if c == 0:
                        continue
                    arg = (r,) + rest
                    ai = fs_in.tuple_index(arg)
                    v = c if sign > 0 else f.neg(c)
                    for m in range(n):
                        out[ti * n + m][ai * n + m] = f.add(
                            out[ti * n + m][ai * n + m], v)
    return Matrix(f, out, cols_dim)


def exact_one_form(algebra: FiniteAlgebra, der: DerivationSpace, a_coords):
    """da as a flat one-form: (da)(u) = u(a)."""
    n = algebra.dim
    f = algebra.field
    out = []
    for u in der.basis_maps():
        out.extend(u.apply(list(a_coords)))
    return out


def wedge(algebra: FiniteAlgebra, der: DerivationSpace,
          phi_flat, r: int, psi_flat, s: int):
    """Shuffle product of an r-form and an s-form (degree r+s flat vector)."""
    n = algebra.dim
    d = der.dim
    f = algebra.field
    if r == 0:
        fs = FormSpace(algebra, der, s, Subspace.full(f, n * d ** s))
        out = []
        for t in product(range(d), repeat=s):
            out.extend(algebra.multiply(phi_flat, fs.value_at(psi_flat, t)))
        return out
    if s == 0:
        fs = FormSpace(algebra, der, r, Subspace.full(f, n * d ** r))
        out = []
        for t in product(range(d), repeat=r):
            out.extend(algebra.multiply(fs.value_at(phi_flat, t), psi_flat))
        return out
    fs_phi = FormSpace(algebra, der, r, Subspace.full(f, n * d ** r))
    fs_psi = FormSpace(algebra, der, s, Subspace.full(f, n * d ** s))
    total = r + s
    out = []
    for t in product(range(d), repeat=total):
        acc = [f.zero()] * n
        for subset in combinations(range(total), r):
            comp = [x for x in range(total) if x not in subset]
            inversions = sum(1 for a in subset for b in comp if a > b)
            sign = 1 if inversions % 2 == 0 else -1
            val = algebra.multiply(fs_phi.value_at(phi_flat, [t[x] for x in subset]),
                                   fs_psi.value_at(psi_flat, [t[x] for x in comp]))
            for m in range(n):
                if val[m] != 0:
                    acc[m] = f.add(acc[m], val[m] if sign > 0 else f.neg(val[m]))
        out.extend(acc)
    return out


def form_multiplication_ops(algebra: FiniteAlgebra, der: DerivationSpace, degree: int):
    """Flat left/right algebra-multiplication operators on k-cochains."""
    f = algebra.field
    d = der.dim
    eye = Matrix.identity(f, d ** degree)
    left = [kron(eye, algebra.left_mult_basis(i)) for i in range(algebra.dim)]
    right = [kron(eye, algebra.right_mult_basis(i)) for i in range(algebra.dim)]
    return left, right


def form_bimodule(algebra: FiniteAlgebra, der: DerivationSpace, degree: int,
                  space: Subspace, name: str) -> Bimodule:
    """A form subspace as a bimodule in its own coordinates."""
    left, right = form_multiplication_ops(algebra, der, degree)
    return Bimodule(algebra, space.dim,
                    [restrict_operator(m, space) for m in left],
                    [restrict_operator(m, space) for m in right],
                    name=name)


class CochainComplex:
    """O^0 → O^1 → … with restricted coboundaries; d∘d = 0 exactly."""

    def __init__(self, algebra: FiniteAlgebra, cap: int = DEGREE_CAP,
                 der: DerivationSpace = None):
        self.algebra = algebra
        self.der = der if der is not None else derivations(algebra, regular_bimodule(algebra))
        self.cap = cap
        self.forms = [ce_forms(algebra, k, self.der, cap) for k in range(cap + 1)]
        self.ambient_d = [ce_coboundary_matrix(algebra, self.der, k)
                          for k in range(cap)]
        self.d = []
        for k in range(cap):
            src = self.forms[k].space
            dst = self.forms[k + 1].space
            cols = []
            for row in src.basis:
                img = self.ambient_d[k].apply(list(row))
                cols.append(dst.coords_of(img))  # raises if d leaves the subcomplex
            self.d.append(Matrix(self.algebra.field,
                                 [[cols[j][i] for j in range(src.dim)]
                                  for i in range(dst.dim)], src.dim))

    def d_squared_is_zero(self) -> bool:
        return all((self.d[k + 1] @ self.d[k]).is_zero()
                   for k in range(len(self.d) - 1))

    def betti_data(self):
        from .linalg import rank
        ranks = [rank(m) for m in self.d]
        out = []
        for k in range(self.cap + 1):
            dim_k = self.forms[k].dim
            ker_dim = dim_k - ranks[k] if k < len(ranks) else dim_k
            img_below = ranks[k - 1] if k > 0 else 0
            out.append({"degree": k, "dim": dim_k, "kernel": ker_dim,
                        "image_from_below": img_below,
                        "betti": ker_dim - img_below})
        return out

    def to_dict(self):
        f = self.algebra.field
        return {
            "algebra": self.algebra.name,
            "dims": [fs.dim for fs in self.forms],
            "d_matrices": [[[f.fmt(x) for x in row] for row in m.data]
                           for m in self.d],
            "d_squared_zero": self.d_squared_is_zero(),
            "betti": self.betti_data(),
        }


class MinimalCalculus:
    """The differential subalgebra generated by the exact one-forms.

    Degree 1 is the bimodule closure of {da}; degree 2 is spanned by wedges
    of degree-1 elements (already closed under both multiplications).
    """

    def __init__(self, algebra: FiniteAlgebra, der: DerivationSpace = None):
        self.algebra = algebra
        self.der = der if der is not None else derivations(algebra, regular_bimodule(algebra))
        f = algebra.field
        n = algebra.dim
        d = self.der.dim
        left1, right1 = form_multiplication_ops(algebra, self.der, 1)
        gens = [exact_one_form(algebra, self.der, algebra.basis_vector(i))
                for i in range(n)]
        self.one_forms = closure(f, n * d, gens, left1 + right1)
        pair_wedges = [wedge(algebra, self.der, list(w1), 1, list(w2), 1)
                       for w1 in self.one_forms.basis for w2 in self.one_forms.basis]
        left2, right2 = form_multiplication_ops(algebra, self.der, 2)
        self.two_forms = closure(f, n * d * d, pair_wedges, left2 + right2)

    def one_forms_bimodule(self) -> Bimodule:
        return form_bimodule(self.algebra, self.der, 1, self.one_forms,
                             f"O1({self.algebra.name})")

    def two_forms_bimodule(self) -> Bimodule:
        return form_bimodule(self.algebra, self.der, 2, self.two_forms,
                             f"O2({self.algebra.name})")

    def d0_matrix(self) -> Matrix:
        """d: A → O^1 in minimal-calculus coordinates."""
        cols = [self.one_forms.coords_of(
            exact_one_form(self.algebra, self.der, self.algebra.basis_vector(i)))
            for i in range(self.algebra.dim)]
        return Matrix(self.algebra.field,
                      [[cols[j][i] for j in range(self.algebra.dim)]
                       for i in range(self.one_forms.dim)], self.algebra.dim)

    def d1_matrix(self) -> Matrix:
        """d: O^1 → O^2 in minimal-calculus coordinates."""
        amb = ce_coboundary_matrix(self.algebra, self.der, 1)
        cols = [self.two_forms.coords_of(amb.apply(list(row)))
                for row in self.one_forms.basis]
        return Matrix(self.algebra.field,
                      [[cols[j][i] for j in range(self.one_forms.dim)]
                       for i in range(self.two_forms.dim)], self.one_forms.dim)


class DualityReport:
    def __init__(self, der_dim, hom_dim, round_trip_ok):
        self.der_dim = der_dim
        self.hom_dim = hom_dim
        self.round_trip_ok = round_trip_ok

    @property
    def ok(self):
        return self.der_dim == self.hom_dim and self.round_trip_ok

    def to_dict(self):
        return {"derivations": self.der_dim, "bimodule_dual": self.hom_dim,
                "round_trip": self.round_trip_ok, "ok": self.ok}


def ce_duality_check(algebra: FiniteAlgebra, minimal: MinimalCalculus = None) -> DualityReport:
    """Derivations ≅ bimodule maps O^1 → A via u ↦ (da ↦ u(a))."""
    if minimal is None:
        minimal = MinimalCalculus(algebra)
    der = minimal.der
    f = algebra.field
    n = algebra.dim
    o1 = minimal.one_forms_bimodule()
    t = o1.dim
    # Hom_{A-A}(O^1, A): F with F L_O(i) = L_A(i) F and F R_O(i) = R_A(i) F
    eye_t = Matrix.identity(f, t)
    eye_n = Matrix.identity(f, n)
    blocks = []
    for i in range(n):
        blocks.append(kron(eye_n, o1.left[i].transpose())
                      - kron(algebra.left_mult_basis(i), eye_t))
        blocks.append(kron(eye_n, o1.right[i].transpose())
                      - kron(algebra.right_mult_basis(i), eye_t))
    hom_space = kernel(vstack(blocks))
    gen_coords = minimal.d0_matrix()  # columns: coords of d(e_i) in O^1 basis
    round_trip = True
    # u ↦ φ_u ↦ u (on the derivation basis)
    for u in der.basis_maps():
        target = [x for row in (u.data) for x in row]
        sys_rows = []
        rhs = []
        for i in range(n):
            gcol = gen_coords.col(i)
            for m in range(n):
                row = [f.zero()] * (n * t)
                for c in range(t):
                    if gcol[c] != 0:
                        row[m * t + c] = gcol[c]
                sys_rows.append(row)
                rhs.append(u.data[m][i])
        sys_rows_m = Matrix(f, sys_rows, n * t)
        cons = hom_space.constraint_matrix()
        from .linalg import solve_affine
        sol = solve_affine([(sys_rows_m, rhs),
                            (cons, [f.zero()] * cons.rows)])
        if not sol.consistent or not sol.is_unique:
            round_trip = False
            continue
        fmat = Matrix(f, [sol.point[r * t:(r + 1) * t] for r in range(n)], t)
        back = fmat @ gen_coords  # u_φ(e_i) = φ(d e_i)
        if back != u:
            round_trip = False
    # φ ↦ u_φ ↦ φ (on the bimodule-dual basis)
    for row in hom_space.basis:
        fmat = Matrix(f, [list(row[r * t:(r + 1) * t]) for r in range(n)], t)
        u = fmat @ gen_coords
        if not der.contains(u):
            round_trip = False
            continue
        # φ_{u_φ} agrees with φ on generators; generators span O^1 as a
        # bimodule and φ is a bimodule map, so equality on them is equality
        for i in range(n):
            if fmat.apply(gen_coords.col(i)) != u.col(i):
                round_trip = False
    return DualityReport(der.dim, hom_space.dim, round_trip)
