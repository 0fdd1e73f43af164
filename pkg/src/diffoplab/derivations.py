"""Derivation modules: Leibniz solvers, Lie (super)brackets, order-1 splits.

A Q-valued derivation is a linear map u: A → Q with u(ab) = u(a)b + a·u(b);
the graded variant inserts (−1)^{[a][u]} before a·u(b).  Maps are matrices
of shape (dim Q) × (dim A), flattened row-major for subspace work.
"""

from __future__ import annotations

from itertools import product

from .algebra import AlgebraError, FiniteAlgebra
from .bimodule import Bimodule
from .linalg import Matrix, Subspace, kernel, vstack


class DerivationSpace:
    """All Q-valued derivations of A, as a subspace of Hom_K(A, Q)."""

    def __init__(self, algebra: FiniteAlgebra, target: Bimodule,
                 space: Subspace, graded: bool):
        self.algebra = algebra
        self.target = target
        self.space = space
        self.graded = graded

    @property
    def dim(self) -> int:
        return self.space.dim

    def as_map(self, coords) -> Matrix:
        flat = self.space.linear_combination(coords)
        return self._unflatten(flat)

    def _unflatten(self, flat) -> Matrix:
        n, mq = self.algebra.dim, self.target.dim
        return Matrix(self.algebra.field, [flat[r * n:(r + 1) * n] for r in range(mq)])

    def basis_maps(self):
        return [self._unflatten(list(row)) for row in self.space.basis]

    def basis_parities(self):
        """Parity of each canonical basis derivation (graded solver only)."""
        if not self.graded:
            raise AlgebraError("ungraded derivation space has no parities")
        pq = self.target.parity
        pa = self.algebra.parity
        n = self.algebra.dim
        out = []
        for row in self.space.basis:
            pars = {(pq[i // n] + pa[i % n]) % 2 for i, x in enumerate(row) if x != 0}
            if len(pars) != 1:
                raise AlgebraError("derivation basis vector is not homogeneous")
            out.append(pars.pop())
        return out

    def contains(self, m: Matrix) -> bool:
        return self.space.contains([x for row in m.data for x in row])

    def coords_of(self, m: Matrix):
        return self.space.coords_of([x for row in m.data for x in row])


def _leibniz_rows(algebra, target, sign_of_pair):
    """Constraint blocks U·(e_i e_j) − R_Q(e_j)(U e_i) − s(i)·L_Q(e_i)(U e_j) = 0."""
    f = algebra.field
    n = algebra.dim
    mq = target.dim
    blocks = []
    for i, j in product(range(n), repeat=2):
        rows = [[f.zero()] * (mq * n) for _ in range(mq)]
        mcol = algebra.sc[i][j]
        for r in range(mq):
            for m in range(n):
                if mcol[m] != 0:
                    rows[r][r * n + m] = f.add(rows[r][r * n + m], mcol[m])
        rq = target.right[j]
        for r in range(mq):
            for s in range(mq):
                if rq.data[r][s] != 0:
                    rows[r][s * n + i] = f.sub(rows[r][s * n + i], rq.data[r][s])
        sgn = sign_of_pair(i)
        lq = target.left[i]
        for r in range(mq):
            for s in range(mq):
                if lq.data[r][s] != 0:
                    val = lq.data[r][s] if sgn > 0 else f.neg(lq.data[r][s])
                    rows[r][s * n + j] = f.sub(rows[r][s * n + j], val)
        blocks.extend(rows)
    return Matrix(f, blocks)


def derivations(algebra: FiniteAlgebra, target: Bimodule,
                graded: bool = False) -> DerivationSpace:
    """Solve the Leibniz system over all basis pairs."""
    if target.algebra is not algebra:
        raise AlgebraError("target module is over a different algebra")
    n, mq = algebra.dim, target.dim
    f = algebra.field
    if not graded:
        system = _leibniz_rows(algebra, target, lambda i: 1)
        return DerivationSpace(algebra, target, kernel(system), False)
    if not algebra.graded or target.parity is None:
        raise AlgebraError("graded derivations need a graded algebra and module")
    if f.char == 2:
        raise AlgebraError("graded operations refuse characteristic 2")
    pa, pq = algebra.parity, target.parity
    spaces = []
    for par in (0, 1):
        sign = lambda i, par=par: -1 if (pa[i] and par) else 1
        system = _leibniz_rows(algebra, target, sign)
        selector = []
        for r in range(mq):
            for c in range(n):
                if (pq[r] + pa[c]) % 2 != par:
                    row = [f.zero()] * (mq * n)
                    row[r * n + c] = f.one()
                    selector.append(row)
        if selector:
            system = vstack([system, Matrix(f, selector)])
        spaces.append(kernel(system))
    total = spaces[0].sum(spaces[1])
    return DerivationSpace(algebra, target, total, True)


def lie_bracket(u: Matrix, v: Matrix) -> Matrix:
    """u∘v − v∘u for endomorphism-valued derivations (Q = A)."""
    return u @ v - v @ u


def super_bracket(u: Matrix, pu: int, v: Matrix, pv: int) -> Matrix:
    """u∘v − (−1)^{[u][v]} v∘u."""
    if pu and pv:
        return u @ v + v @ u
    return u @ v - v @ u


def inner_derivation(reg: Bimodule, q_coords) -> Matrix:
    """a ↦ qa − aq on the regular bimodule."""
    return reg.algebra.right_mult(q_coords) - reg.algebra.left_mult(q_coords)


class FirstOrderSplit:
    """Order-1 operators on A as zero-order part ⊕ derivations."""

    def __init__(self, zero_part: Subspace, derivation_part: Subspace,
                 total: Subspace):
        self.zero_part = zero_part
        self.derivation_part = derivation_part
        self.total = total
        self.direct = (zero_part.intersect(derivation_part).dim == 0
                       and zero_part.sum(derivation_part) == total)

    @property
    def dims(self):
        return {"zero": self.zero_part.dim, "derivation": self.derivation_part.dim,
                "total": self.total.dim}


def first_order_decomposition(algebra: FiniteAlgebra, target: Bimodule,
                              diff1: Subspace, graded: bool = False,
                              side: str = None) -> FirstOrderSplit:
    """Split Diff_1(A, Q) as zero-order operators ⊕ derivations.

    The zero-order part is Δ_q(a) = a·q (side "left", the ungraded default)
    or Δ_q(a) = q·a (side "right", the graded convention); over a
    noncommutative base the two splits differ exactly by the inner
    derivations, and both are direct.
    """
    if side is None:
        side = "right" if graded else "left"
    n, mq = algebra.dim, target.dim
    f = algebra.field
    vecs = []
    for qi in range(mq):
        qvec = target.basis_vector(qi)
        cols = []
        for i in range(n):
            if side == "right":
                cols.append(target.right_combination(algebra.basis_vector(i)).apply(qvec))
            else:
                cols.append(target.left_combination(algebra.basis_vector(i)).apply(qvec))
        flat = [cols[c][r] for r in range(mq) for c in range(n)]
        vecs.append(flat)
    zero_part = Subspace.from_spanning(f, mq * n, vecs)
    der = derivations(algebra, target, graded)
    return FirstOrderSplit(zero_part, der.space, diff1)


def split_operator(algebra: FiniteAlgebra, target: Bimodule, delta: Matrix,
                   graded: bool = False):
    """Decompose one order-1 operator as (value at 1, derivation remainder)."""
    q = delta.apply(list(algebra.unit))
    n, mq = algebra.dim, target.dim
    cols = []
    for i in range(n):
        if graded:
            cols.append(target.right_combination(algebra.basis_vector(i)).apply(q))
        else:
            cols.append(target.left_combination(algebra.basis_vector(i)).apply(q))
    zero_matrix = Matrix(algebra.field,
                         [[cols[c][r] for c in range(n)] for r in range(mq)])
    return q, zero_matrix, delta - zero_matrix
