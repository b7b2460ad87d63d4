"""Exact rational linear algebra and small polyhedral helpers.

Everything here works on lists of ``int``/``Fraction`` and never touches
floating point.  Matrices are lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

Vector = Sequence
Matrix = Sequence[Sequence]


def frac_matrix(M: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def dot(a: Vector, b: Vector):
    return sum((x * y for x, y in zip(a, b)), 0)


def transpose(M: Matrix) -> list[list]:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(M: Matrix, N: Matrix) -> list[list]:
    Nt = transpose(N)
    return [[dot(row, col) for col in Nt] for row in M]


def matvec(M: Matrix, v: Vector) -> list:
    return [dot(row, v) for row in M]


def vecmat(v: Vector, M: Matrix) -> list:
    return matvec(transpose(M), v)


def row_echelon(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    R = frac_matrix(M)
    pivots = []
    if not R:
        return R, pivots
    nrows, ncols = len(R), len(R[0])
    i = 0
    for j in range(ncols):
        p = next((k for k in range(i, nrows) if R[k][j] != 0), None)
        if p is None:
            continue
        R[i], R[p] = R[p], R[i]
        piv = R[i][j]
        R[i] = [x / piv for x in R[i]]
        for k in range(nrows):
            if k != i and R[k][j] != 0:
                f = R[k][j]
                R[k] = [a - f * b for a, b in zip(R[k], R[i])]
        pivots.append(j)
        i += 1
        if i == nrows:
            break
    return R, pivots


def rank(M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(row_echelon(M)[1])


def det(M: Matrix) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = frac_matrix(M)
    result = Fraction(1)
    for j in range(n):
        p = next((k for k in range(j, n) if A[k][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != j:
            A[j], A[p] = A[p], A[j]
            result = -result
        result *= A[j][j]
        for k in range(j + 1, n):
            if A[k][j] != 0:
                f = A[k][j] / A[j][j]
                A[k] = [a - f * b for a, b in zip(A[k], A[j])]
    return result


def inverse(M: Matrix) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(frac_matrix(M))]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(M: Matrix, b: Vector) -> Optional[list[Fraction]]:
    """Solve M x = b; return one solution or None if inconsistent."""
    if not M:
        return [] if all(x == 0 for x in b) else None
    ncols = len(M[0])
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    R, piv = row_echelon(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for i, j in enumerate(piv):
        x[j] = R[i][ncols]
    return x


def rational_kernel(M: Matrix, ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of the rational null space {x : M x = 0}."""
    if not M:
        return [[Fraction(int(i == j)) for j in range(ncols or 0)] for i in range(ncols or 0)]
    ncols = len(M[0])
    R, piv = row_echelon(M)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, j in enumerate(piv):
            x[j] = -R[i][f]
        basis.append(x)
    return basis


def primitive(v: Vector) -> list[int]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def in_cone(x: Vector, gens: Sequence[Vector]) -> bool:
    """Exact membership of x in the closed cone generated by gens.

    Uses Caratheodory: x is in the cone iff it is a nonnegative combination
    of a linearly independent subset of the generators.
    """
    if all(c == 0 for c in x):
        return True
    gens = [list(g) for g in gens if any(c != 0 for c in g)]
    if not gens:
        return False
    r = rank(gens)
    for k in range(1, r + 1):
        for sub in combinations(range(len(gens)), k):
            cols = transpose([gens[i] for i in sub])
            coeffs = solve(cols, x)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                if rank([gens[i] for i in sub]) == k:
                    return True
    return False


def cone_facet_normals(gens: Sequence[Vector], dim: int) -> list[list[int]]:
    """Primitive inner facet normals of a full-dimensional cone.

    Returns integer covectors h with h.g >= 0 for all generators; the cone
    equals the intersection of these half spaces.  For a cone that is all
    of R^dim the list is empty.
    """
    gens = [list(g) for g in gens]
    if dim == 1:
        signs = {(g[0] > 0) - (g[0] < 0) for g in gens} - {0}
        return [[s] for s in sorted(signs)] if len(signs) == 1 else []
    normals = []
    seen = set()
    for sub in combinations(range(len(gens)), dim - 1):
        rows = [gens[i] for i in sub]
        if rank(rows) != dim - 1:
            continue
        ker = rational_kernel(rows)
        h = primitive(ker[0])
        vals = [dot(h, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            h = [-c for c in h]
        else:
            continue
        key = tuple(h)
        if key not in seen:
            seen.add(key)
            normals.append(h)
    return normals


def cone_extreme_rays(normals: Sequence[Vector], dim: int) -> list[list[int]]:
    """Extreme rays of the pointed full-dimensional cone {x : h.x >= 0}."""
    if dim == 1:
        return [[n[0] // abs(n[0])] for n in normals[:1]]
    rays = []
    seen = set()
    for sub in combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in sub]
        if rank(rows) != dim - 1:
            continue
        v = primitive(rational_kernel(rows)[0])
        for cand in (v, [-c for c in v]):
            if all(dot(h, cand) >= 0 for h in normals):
                key = tuple(cand)
                if key not in seen:
                    seen.add(key)
                    rays.append(cand)
    return rays


def lp_minimize(c: Vector, A_eq: Matrix, b_eq: Vector, free: Sequence[int] = ()):
    """Minimize c.x subject to A_eq x = b_eq, x_j >= 0 for j not in free.

    Dense two-phase simplex with Bland's rule over Fractions.  Returns
    ``(status, value, x)`` with status one of 'optimal', 'infeasible',
    'unbounded'.
    """
    n = len(c)
    free = set(free)
    # split free variables into positive and negative parts
    cols = []
    for j in range(n):
        cols.append((j, 1))
        if j in free:
            cols.append((j, -1))
    m = len(A_eq)
    rows = []
    rhs = []
    for i in range(m):
        row = [Fraction(A_eq[i][j]) * s for j, s in cols]
        b = Fraction(b_eq[i])
        if b < 0:
            row = [-x for x in row]
            b = -b
        rows.append(row)
        rhs.append(b)
    N = len(cols)
    cost = [Fraction(c[j]) * s for j, s in cols]
    # phase one tableau with artificials N..N+m-1
    T = [rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [N + i for i in range(m)]

    def pivot(r, q):
        pv = T[r][q]
        T[r] = [x / pv for x in T[r]]
        for i in range(m):
            if i != r and T[i][q] != 0:
                f = T[i][q]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = q

    def run(obj, allowed):
        while True:
            # reduced costs
            red = []
            for q in allowed:
                zq = sum((obj[basis[i]] * T[i][q] for i in range(m)), Fraction(0))
                red.append((q, obj[q] - zq))
            enter = next((q for q, rc in red if rc < 0), None)
            if enter is None:
                return "optimal"
            ratios = [(T[i][-1] / T[i][enter], basis[i], i) for i in range(m) if T[i][enter] > 0]
            if not ratios:
                return "unbounded"
            best = min(ratios)
            tied = [t for t in ratios if t[0] == best[0]]
            leave = min(tied, key=lambda t: t[1])[2]
            pivot(leave, enter)

    obj1 = [Fraction(0)] * N + [Fraction(1)] * m
    run(obj1, list(range(N + m)))
    if sum((T[i][-1] for i in range(m) if basis[i] >= N), Fraction(0)) != 0:
        return "infeasible", None, None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= N:
            q = next((q for q in range(N) if T[i][q] != 0), None)
            if q is not None:
                pivot(i, q)
    obj2 = cost + [Fraction(0)] * m
    status = run(obj2, [q for q in range(N)])
    if status == "unbounded":
        return "unbounded", None, None
    xs = [Fraction(0)] * N
    for i in range(m):
        if basis[i] < N:
            xs[basis[i]] = T[i][-1]
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * xs[k]
    value = sum((Fraction(c[j]) * x[j] for j in range(n)), Fraction(0))
    return "optimal", value, x
