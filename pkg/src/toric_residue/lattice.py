"""Lattices, Hermite forms, saturated kernels and Gale duality.

A configuration B of n integer vectors spanning a rank-d lattice gives the
exact sequence 0 -> a -> Z^n -> t -> 0, where the projection sends the
i-th unit vector to beta_i and a is the integer kernel.  The Gale dual A
consists of the restrictions alpha_i of the coordinate functions to a, i.e.
the rows of the inclusion matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, NotSaturated
from .linalg import det, in_cone, rank, transpose

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class LatticeSpace:
    rank: int
    orientation: int = 1

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")


@dataclass(frozen=True)
class VectorConfiguration:
    space: LatticeSpace
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for v in self.vectors:
            if len(v) != self.space.rank:
                raise DimensionMismatch(f"vector {v} does not have length {self.space.rank}")

    @classmethod
    def of(cls, vectors: Sequence[Sequence[int]], orientation: int = 1) -> "VectorConfiguration":
        vecs = tuple(tuple(int(x) for x in v) for v in vectors)
        if not vecs:
            raise DimensionMismatch("empty configuration")
        return cls(LatticeSpace(len(vecs[0]), orientation), vecs)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __iter__(self):
        return iter(self.vectors)

    @property
    def dim(self) -> int:
        return self.space.rank

    def total(self) -> tuple[int, ...]:
        """Sum of all vectors (kappa_A for the configuration A)."""
        return tuple(sum(col) for col in zip(*self.vectors)) if self.vectors else ()

    def to_json(self):
        return [[str(x) for x in v] for v in self.vectors]


@dataclass(frozen=True)
class ExactSequenceData:
    a_space: LatticeSpace
    g_space: LatticeSpace
    t_space: LatticeSpace
    inclusion_matrix: tuple[tuple[int, ...], ...]
    projection_matrix: tuple[tuple[int, ...], ...]
    A: VectorConfiguration
    B: VectorConfiguration
    _check: bool = field(default=True, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.g_space.rank

    @property
    def r(self) -> int:
        return self.a_space.rank

    @property
    def d(self) -> int:
        return self.t_space.rank

    @property
    def kappa(self) -> tuple[int, ...]:
        return self.A.total()

    def to_json(self):
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "inclusion": [[str(x) for x in row] for row in self.inclusion_matrix],
            "projection": [[str(x) for x in row] for row in self.projection_matrix],
            "n": self.n,
            "r": self.r,
            "d": self.d,
        }


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns (H, U) with H = U M and det U = +-1.

    H is in row echelon form with positive pivots and the entries above
    each pivot reduced into [0, pivot).
    """
    if not M:
        raise DimensionMismatch("empty matrix")
    H = [[int(x) for x in row] for row in M]
    m, ncols = len(H), len(H[0])
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    i = 0
    for j in range(ncols):
        if i >= m:
            break
        for k in range(i + 1, m):
            if H[k][j] == 0:
                continue
            a, b = H[i][j], H[k][j]
            g, x, y = _xgcd(a, b)
            p, q = -b // g, a // g
            for T in (H, U):
                ri, rk = T[i], T[k]
                T[i] = [x * s + y * t for s, t in zip(ri, rk)]
                T[k] = [p * s + q * t for s, t in zip(ri, rk)]
        if H[i][j] == 0:
            continue
        if H[i][j] < 0:
            H[i] = [-v for v in H[i]]
            U[i] = [-v for v in U[i]]
        piv = H[i][j]
        for k in range(i):
            f = H[k][j] // piv
            if f:
                H[k] = [s - f * t for s, t in zip(H[k], H[i])]
                U[k] = [s - f * t for s, t in zip(U[k], U[i])]
        i += 1
    return H, U


def kernel_basis(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of the saturated integer kernel {x in Z^n : M x = 0}.

    The basis is returned in Hermite normal form, so it is canonical.
    """
    if not M:
        return []
    ncols = len(M[0])
    H, U = hermite_normal_form(transpose(M))
    kernel = [U[i] for i in range(ncols) if all(v == 0 for v in H[i])]
    if not kernel:
        return []
    K, _ = hermite_normal_form(kernel)
    return [row for row in K if any(v != 0 for v in row)]


def generates_lattice(vectors: Sequence[Sequence[int]], dim: int) -> bool:
    """True iff the integer vectors generate Z^dim."""
    if not vectors:
        return dim == 0
    H, _ = hermite_normal_form(vectors)
    nonzero = [row for row in H if any(v != 0 for v in row)]
    if len(nonzero) != dim:
        return False
    return all(nonzero[i][i] == 1 for i in range(dim))


def _check_matrix(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [[int(x) for x in v] for v in vectors]
    if not rows:
        raise DimensionMismatch("empty configuration")
    width = len(rows[0])
    if any(len(v) != width for v in rows):
        raise DimensionMismatch("vectors of different lengths")
    return rows


def gale_dual(B) -> ExactSequenceData:
    """Exact sequence and Gale dual A of a configuration B generating t_Z."""
    rows = _check_matrix(B.vectors if isinstance(B, VectorConfiguration) else B)
    n, d = len(rows), len(rows[0])
    if d == 0 or rank(rows) != d:
        raise DimensionMismatch("B does not span its space")
    if not generates_lattice(rows, d):
        raise NotSaturated("B does not generate its lattice over Z")
    proj = transpose(rows)
    kernel = kernel_basis(proj)
    r = len(kernel)
    if r == 0:
        raise DimensionMismatch("B has no linear relations; the dual space is zero")
    incl = transpose(kernel)
    Bconf = VectorConfiguration(LatticeSpace(d), tuple(tuple(v) for v in rows))
    Aconf = VectorConfiguration(LatticeSpace(r), tuple(tuple(v) for v in incl))
    return ExactSequenceData(
        a_space=LatticeSpace(r),
        g_space=LatticeSpace(n),
        t_space=LatticeSpace(d),
        inclusion_matrix=tuple(tuple(v) for v in incl),
        projection_matrix=tuple(tuple(v) for v in proj),
        A=Aconf,
        B=Bconf,
    )


def sequence_from_A(A) -> ExactSequenceData:
    """Exact sequence with the given A (rows of the inclusion) and B its dual.

    A must generate a_Z^* over Z, so that the inclusion has saturated image.
    """
    rows = _check_matrix(A.vectors if isinstance(A, VectorConfiguration) else A)
    n, r = len(rows), len(rows[0])
    if rank(rows) != r:
        raise DimensionMismatch("A does not span its space")
    if not generates_lattice(rows, r):
        raise NotSaturated("A does not generate the dual lattice over Z")
    proj = kernel_basis(transpose(rows))
    d = len(proj)
    Bvecs = tuple(tuple(v) for v in transpose(proj)) if d else tuple(() for _ in range(n))
    return ExactSequenceData(
        a_space=LatticeSpace(r),
        g_space=LatticeSpace(n),
        t_space=LatticeSpace(d),
        inclusion_matrix=tuple(tuple(v) for v in rows),
        projection_matrix=tuple(tuple(v) for v in proj),
        A=VectorConfiguration(LatticeSpace(r), tuple(tuple(v) for v in rows)),
        B=VectorConfiguration(LatticeSpace(d), Bvecs),
    )


def is_projective(A) -> bool:
    """True iff some linear functional is strictly positive on every alpha_i.

    By Gordan's alternative this fails iff some nonnegative combination of
    the alpha_i with a positive coefficient vanishes, i.e. iff some alpha_i
    is zero or -alpha_i lies in Cone(A).
    """
    vecs = [list(v) for v in (A.vectors if isinstance(A, VectorConfiguration) else A)]
    if any(all(x == 0 for x in v) for v in vecs):
        return False
    return not any(in_cone([-x for x in v], vecs) for v in vecs)


def unimodular_transform(M1: Sequence[Sequence[int]], M2: Sequence[Sequence[int]]):
    """Find integer T with det T = +-1 and v2 = T v1 for all column pairs.

    M1, M2 are lists of vectors (rows); returns T or None.
    """
    from .linalg import solve

    X = [list(v) for v in M1]
    Y = [list(v) for v in M2]
    if len(X) != len(Y):
        return None
    dim = len(X[0])
    # T v1_i = v2_i for all i  <=>  X T^t = Y
    T_rows = []
    for k in range(dim):
        col = solve(X, [y[k] for y in Y])
        if col is None:
            return None
        T_rows.append(col)
    if any(Fraction(x).denominator != 1 for row in T_rows for x in row):
        return None
    # check consistency of all equations
    for x, y in zip(X, Y):
        if [sum(T_rows[k][j] * x[j] for j in range(dim)) for k in range(dim)] != list(y):
            return None
    if abs(det(T_rows)) != 1:
        return None
    return [[int(x) for x in row] for row in T_rows]
