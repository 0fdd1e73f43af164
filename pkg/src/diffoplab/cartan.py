"""Cartan pairs: vector fields from one-sided duals of a degree-1 calculus.

Given a bimodule Q with a Q-valued derivation d, every right-linear
functional u: Q → A yields the operator û(a) = u(da).  The pair (dual, hat)
is the right Cartan pair; the left pair mirrors it with left-linear
functionals.  The hats are the candidate noncommutative vector fields, and
the comparison report records which differential-operator definitions each
one satisfies.
"""

from __future__ import annotations

from itertools import product

from .algebra import FiniteAlgebra
from .bimodule import Bimodule, left_dual, regular_bimodule, right_dual
from .derivations import derivations
from .diffops import dv_first_order, lunts_filtration
from .linalg import Matrix, Subspace


class CartanPair:
    def __init__(self, algebra: FiniteAlgebra, q: Bimodule, d_matrix: Matrix,
                 side: str):
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        self.algebra = algebra
        self.q = q
        self.d_matrix = d_matrix
        self.side = side
        self.dual = right_dual(q) if side == "right" else left_dual(q)

    def hat(self, dual_coords) -> Matrix:
        """û = u ∘ d as an operator on the algebra."""
        return self.dual.as_map(dual_coords) @ self.d_matrix

    def hat_basis(self):
        f = self.algebra.field
        out = []
        for i in range(self.dual.dim):
            coords = [f.one() if j == i else f.zero() for j in range(self.dual.dim)]
            out.append(self.hat(coords))
        return out

    def relations_hold(self) -> bool:
        """The two structure identities of the pair, on all basis pairs.

        Right pair:  (bu)^(a) = b·u(da)  and  û(ba) = û(b)a + (ub)^(a).
        Left pair mirrors with the opposite multiplications.
        """
        alg = self.algebra
        f = alg.field
        n = alg.dim
        dual = self.dual
        for r in range(dual.dim):
            coords = [f.one() if j == r else f.zero() for j in range(dual.dim)]
            u_map = dual.as_map(coords)
            u_hat = u_map @ self.d_matrix
            for i in range(n):
                scaled = dual.bimodule.left[i].apply(coords) if self.side == "right" \
                    else dual.bimodule.right[i].apply(coords)
                lhs = self.hat(scaled)
                rhs = (alg.left_mult_basis(i) @ u_hat if self.side == "right"
                       else alg.right_mult_basis(i) @ u_hat)
                if lhs != rhs:
                    return False
            for i, j in product(range(n), repeat=2):
                if self.side == "right":
                    moved = dual.bimodule.right[i].apply(coords)  # ub
                    lhs = u_hat.apply(alg.sc[i][j])               # û(e_i e_j)
                    rhs = alg.right_mult_basis(j).apply(
                        u_hat.col(i))                             # û(e_i)·e_j
                    rhs2 = self.hat(moved).col(j)                 # (u e_i)^(e_j)
                else:
                    moved = dual.bimodule.left[j].apply(coords)   # bu
                    lhs = u_hat.apply(alg.sc[i][j])               # û(e_i e_j)
                    rhs = alg.left_mult_basis(i).apply(
                        u_hat.col(j))                             # e_i·û(e_j)
                    rhs2 = self.hat(moved).col(i)                 # (e_j u)^(e_i)
                want = [f.add(x, y) for x, y in zip(rhs, rhs2)]
                if lhs != want:
                    return False
        return True


def build_cartan_pair(algebra: FiniteAlgebra, q: Bimodule, d_matrix: Matrix,
                      side: str = "right") -> CartanPair:
    """Check d is a Q-valued derivation, then assemble the pair."""
    der = derivations(algebra, q)
    if not der.contains(d_matrix):
        raise ValueError("the supplied map is not a derivation into Q")
    pair = CartanPair(algebra, q, d_matrix, side)
    if not pair.relations_hold():
        raise AssertionError("structure identities failed on the built pair")
    return pair


def first_order_violation_witness(algebra: FiniteAlgebra, op: Matrix):
    """First basis triple (a, b, p) where the bimodule first-order condition
    a·op(p)·b − a·op(pb) − op(ap)·b + op(apb) fails on the regular bimodule."""
    n = algebra.dim
    for i, j in product(range(n), repeat=2):
        la = algebra.left_mult_basis(i)
        rb = algebra.right_mult_basis(j)
        residual = la @ rb @ op - la @ op @ rb - rb @ op @ la + op @ la @ rb
        if not residual.is_zero():
            for k in range(n):
                col = residual.col(k)
                if any(x != 0 for x in col):
                    return {"a": i, "b": j, "p": k,
                            "residual": [algebra.field.fmt(x) for x in col]}
    return None


def cartan_vs_definitions(pair: CartanPair, lunts_order: int = 1) -> dict:
    """Membership of every hat operator in the competing definitions.

    Reports, per dual basis element: derivation? bimodule-first-order?
    inside the left inductive filtration at the stated order?  Includes a
    concrete failing triple whenever some hat violates the bimodule
    first-order condition.
    """
    alg = pair.algebra
    reg = regular_bimodule(alg)
    der = derivations(alg, reg)
    dv = dv_first_order(reg, reg)
    flt = lunts_filtration(reg, reg, lunts_order, "left")
    entries = []
    witness = None
    for idx, u_hat in enumerate(pair.hat_basis()):
        flat = [x for row in u_hat.data for x in row]
        is_der = der.space.contains(flat)
        is_dv = dv.space.contains(flat)
        in_lunts = flt[lunts_order].contains(flat)
        entries.append({
            "dual_index": idx,
            "derivation": is_der,
            "dv_first_order": is_dv,
            f"lunts_left_{lunts_order}": in_lunts,
        })
        if not is_dv and witness is None:
            witness = first_order_violation_witness(alg, u_hat)
            witness["dual_index"] = idx
    return {
        "side": pair.side,
        "dual_dim": pair.dual.dim,
        "entries": entries,
        "violation_witness": witness,
        "all_dv": all(e["dv_first_order"] for e in entries),
    }


def two_sided_dual_space(pair: CartanPair) -> Subspace:
    """Functionals linear on both sides, inside the pair's one-sided dual."""
    other = left_dual(pair.q) if pair.side == "right" else right_dual(pair.q)
    return pair.dual.space.intersect(other.space)


def two_sided_hats_are_first_order(pair: CartanPair) -> bool:
    """Hats of two-sided dual elements satisfy the bimodule condition."""
    alg = pair.algebra
    reg = regular_bimodule(alg)
    dv = dv_first_order(reg, reg)
    both = two_sided_dual_space(pair)
    mq = pair.q.dim
    n = alg.dim
    f = alg.field
    for row in both.basis:
        u_map = Matrix(f, [list(row[r * mq:(r + 1) * mq]) for r in range(n)], mq)
        u_hat = u_map @ pair.d_matrix
        if not dv.space.contains([x for r in u_hat.data for x in r]):
            return False
    return True


def mirror_pair_agrees(algebra: FiniteAlgebra, q: Bimodule, d_matrix: Matrix) -> bool:
    """The left pair equals the right pair built over the opposite algebra."""
    left = CartanPair(algebra, q, d_matrix, "left")
    op = algebra.opposite()
    q_op = Bimodule(op, q.dim, q.right, q.left, q.parity, name=q.name + "^op")
    right = CartanPair(op, q_op, d_matrix, "right")
    return left.dual.space == right.dual.space
