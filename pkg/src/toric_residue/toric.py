"""Toric data attached to a chamber: fan, intersection numbers, G, polytopes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .chambers import Chamber, as_tuple_config, enumerate_chambers
from .errors import EmptyPolytope
from .lattice import ExactSequenceData
from .linalg import det, in_cone, rank, solve, transpose
from .poly import Poly
from .residues import form_poly, jk_residue, polynomial_in_forms, section


@dataclass(frozen=True)
class FanDescription:
    maximal_cones: tuple[tuple[int, ...], ...]

    def to_json(self):
        return {"maximal_cones": [[i + 1 for i in nu] for nu in self.maximal_cones]}


@dataclass(frozen=True)
class PartitionPolytope:
    theta: tuple[int, ...]
    vertices: tuple[tuple[Fraction, ...], ...]

    def to_json(self):
        return {
            "theta": [str(x) for x in self.theta],
            "vertices": [[str(x) for x in v] for v in self.vertices],
        }


def fan_of_chamber(seq: ExactSequenceData, c: Chamber) -> FanDescription:
    """d-subsets nu whose complementary alphas span a cone containing c."""
    A = seq.A.vectors
    n, d = seq.n, seq.d
    cones = []
    for nu in combinations(range(n), d):
        comp = [list(A[k]) for k in range(n) if k not in nu]
        if rank(comp) != seq.r:
            continue
        if in_cone(list(c.interior_point), comp):
            cones.append(nu)
    return FanDescription(tuple(cones))


def vol_B(seq: ExactSequenceData, nu: Sequence[int]) -> int:
    """|det| of the beta_j, j in nu (zero when dependent)."""
    if len(nu) != seq.d:
        raise ValueError("nu must have d elements")
    M = [list(seq.B.vectors[j]) for j in nu]
    return abs(int(det(M)))


def intersection_number(seq: ExactSequenceData, c: Chamber, Q: Poly) -> Fraction:
    """JK_c(Q(alpha_1, ..., alpha_n) / prod alpha_i)."""
    A = seq.A.vectors
    num = polynomial_in_forms(Q, A)
    return jk_residue(section(A, num, [1] * seq.n), c, A)


def g_polynomial(seq: ExactSequenceData) -> Poly:
    """G(u) = sum over d-subsets nu of vol_B(nu)^2 prod_{j in nu} alpha_j(u)."""
    r = seq.r
    A = seq.A.vectors
    G = Poly.zero(r)
    for nu in combinations(range(seq.n), seq.d):
        v = vol_B(seq, nu)
        if v == 0:
            continue
        term = Poly.constant(r, v * v)
        for j in nu:
            term = term * form_poly(A[j])
        G = G + term
    return G


def partition_polytope(A, theta: Sequence[int]) -> PartitionPolytope:
    """Vertices of {c >= 0 : sum c_i alpha_i = theta} by basic feasible solutions."""
    if isinstance(A, ExactSequenceData):
        A = A.A.vectors
    A = as_tuple_config(A)
    n, r = len(A), len(A[0])
    verts = set()
    for sub in combinations(range(n), r):
        cols = transpose([list(A[i]) for i in sub])
        if det(cols) == 0:
            continue
        x = solve(cols, list(theta))
        if all(v >= 0 for v in x):
            full = [Fraction(0)] * n
            for i, v in zip(sub, x):
                full[i] = v
            verts.add(tuple(full))
    if not verts:
        raise EmptyPolytope(f"theta={tuple(theta)} is outside Cone(A)")
    return PartitionPolytope(tuple(int(t) for t in theta), tuple(sorted(verts)))


def minkowski_check(A, theta_list: Sequence[Sequence[int]]) -> tuple[bool, Optional[Chamber]]:
    """Whether all theta_k lie in the closure of one chamber; returns the first such."""
    if isinstance(A, ExactSequenceData):
        A = A.A.vectors
    for ch in enumerate_chambers(A):
        if all(ch.closure_contains(th) for th in theta_list):
            return True, ch
    return False, None
