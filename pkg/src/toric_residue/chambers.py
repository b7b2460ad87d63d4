"""Chambers of Cone(A), flags FL(A) and flag-regularity of vectors.

Vectors of a* are integer or rational row vectors in the coordinates dual
to the lattice basis of a; index subsets are 0-based internally and
converted to 1-based only when serialized.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import ceil, floor
from typing import Optional, Sequence

from .errors import NotProjective, NotSpanning, UnboundedSlice
from .lattice import VectorConfiguration, hermite_normal_form, is_projective
from .linalg import (
    cone_extreme_rays,
    det,
    dot,
    in_cone,
    inverse,
    lp_minimize,
    matmul,
    primitive,
    rank,
    rational_kernel,
    solve,
    transpose,
)

CLOSED = "closed_s"
PLUS = "plus_s"


def as_tuple_config(A) -> tuple[tuple[int, ...], ...]:
    if isinstance(A, VectorConfiguration):
        return A.vectors
    return tuple(tuple(int(x) for x in v) for v in A)


def _frac_str(x) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class Chamber:
    """An open chamber of Cone(A) with its exact combinatorial description."""

    interior_point: tuple[Fraction, ...]
    basis_cones: frozenset[tuple[int, ...]]
    rays: tuple[tuple[int, ...], ...]
    facet_normals: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.interior_point)

    def sort_key(self):
        return tuple(sorted(self.basis_cones))

    def contains(self, xi: Sequence) -> bool:
        """Open membership (strict inequalities on every facet)."""
        return all(dot(h, xi) > 0 for h in self.facet_normals)

    def closure_contains(self, xi: Sequence) -> bool:
        return all(dot(h, xi) >= 0 for h in self.facet_normals)

    def polar_rays(self) -> list[list[int]]:
        """Extreme rays of the polar cone {lam : <x, lam> >= 0 for x in c}."""
        return [list(h) for h in self.facet_normals]

    def to_json(self):
        return {
            "interior_point": [_frac_str(x) for x in self.interior_point],
            "basis_cones": [[i + 1 for i in s] for s in sorted(self.basis_cones)],
            "rays": [[str(x) for x in v] for v in self.rays],
        }


@lru_cache(maxsize=256)
def _walls(A: tuple) -> tuple[tuple[int, ...], ...]:
    """Primitive normals of hyperplanes spanned by r-1 independent alphas."""
    r = len(A[0])
    if r == 1:
        return ()
    out = []
    seen = set()
    for sub in combinations(range(len(A)), r - 1):
        rows = [A[i] for i in sub]
        if rank(rows) != r - 1:
            continue
        h = primitive(rational_kernel(rows)[0])
        first = next(x for x in h if x != 0)
        if first < 0:
            h = [-x for x in h]
        if tuple(h) not in seen:
            seen.add(tuple(h))
            out.append(tuple(h))
    return tuple(out)


@lru_cache(maxsize=256)
def _bases(A: tuple) -> tuple[tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]], ...]:
    """Independent r-subsets sigma with the inverse of their column matrix."""
    r = len(A[0])
    out = []
    for sub in combinations(range(len(A)), r):
        cols = transpose([A[i] for i in sub])
        if det(cols) == 0:
            continue
        out.append((sub, tuple(tuple(row) for row in inverse(cols))))
    return tuple(out)


def _check_spanning(A: tuple) -> None:
    if rank([list(v) for v in A]) != len(A[0]):
        raise NotSpanning("A does not span a*")


def signature(A, xi: Sequence) -> frozenset[tuple[int, ...]]:
    """Set of bases sigma with xi in the open simplicial cone of alpha_sigma."""
    A = as_tuple_config(A)
    sig = []
    for sub, inv in _bases(A):
        coeffs = [dot(row, xi) for row in inv]
        if all(c > 0 for c in coeffs):
            sig.append(sub)
    return frozenset(sig)


def in_cone_A(A, xi: Sequence) -> bool:
    return in_cone(list(xi), [list(v) for v in as_tuple_config(A)])


def is_A_regular(A, xi: Sequence) -> bool:
    """xi lies in Cone(A) and in no cone spanned by fewer than r independent alphas."""
    A = as_tuple_config(A)
    if all(Fraction(x) == 0 for x in xi):
        return False
    if not in_cone_A(A, xi):
        return False
    for h in _walls(A):
        if dot(h, xi) == 0:
            on_wall = [list(a) for a in A if dot(h, a) == 0]
            if in_cone(list(xi), on_wall):
                return False
    return True


def _chamber_from_signature(A: tuple, sig: frozenset) -> Chamber:
    r = len(A[0])
    inv_of = dict(_bases(A))
    normals = []
    seen = set()
    for sub in sorted(sig):
        for row in inv_of[sub]:
            h = tuple(primitive(row))
            if h not in seen:
                seen.add(h)
                normals.append(h)
    rays = sorted(tuple(v) for v in cone_extreme_rays(normals, r))
    facets = []
    for h in normals:
        tight = [v for v in rays if dot(h, v) == 0]
        if r == 1 or (tight and rank([list(v) for v in tight]) == r - 1):
            facets.append(h)
    if r == 1:
        facets = [tuple(rays[0])]
    interior = tuple(Fraction(sum(col)) for col in zip(*rays))
    return Chamber(interior, sig, tuple(rays), tuple(sorted(set(facets))))


def chamber_containing(A, xi: Sequence) -> Optional[Chamber]:
    """The chamber of an A-regular xi, or None if xi is singular."""
    A = as_tuple_config(A)
    xi = [Fraction(x) for x in xi]
    if not is_A_regular(A, xi):
        return None
    return _chamber_from_signature(A, signature(A, xi))


def _regular_seed_point(A: tuple, rng: random.Random) -> list[Fraction]:
    bases = _bases(A)
    for _ in range(1000):
        sub, _inv = bases[rng.randrange(len(bases))]
        w = [Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3)) for _ in sub]
        xi = [sum(w[k] * A[i][j] for k, i in enumerate(sub)) for j in range(len(A[0]))]
        if is_A_regular(A, xi):
            return xi
    raise RuntimeError("could not find a regular starting point")


def enumerate_chambers(A) -> list[Chamber]:
    """All chambers of Cone(A), ordered by their sorted basis cones.

    Walks the adjacency graph of the chamber fan: from each chamber, step
    just across every facet that is not on the boundary of Cone(A).
    """
    A = as_tuple_config(A)
    _check_spanning(A)
    if not is_projective(A):
        raise NotProjective("A is not projective")
    return list(_enumerate_chambers_cached(A))


@lru_cache(maxsize=64)
def _enumerate_chambers_cached(A: tuple) -> tuple[Chamber, ...]:
    r = len(A[0])
    rng = random.Random(0)
    start = _regular_seed_point(A, rng)
    first = _chamber_from_signature(A, signature(A, start))
    found = {first.basis_cones: first}
    queue = [first]
    walls = _walls(A)
    while queue:
        ch = queue.pop()
        if r == 1:
            break
        x = ch.interior_point
        for h in ch.facet_normals:
            tight = [v for v in ch.rays if dot(h, v) == 0]
            parallel = (tuple(h), tuple(-c for c in h))
            for _ in range(100):
                w = [Fraction(rng.randint(1, 1000), rng.randint(1, 100)) for _ in tight]
                f = [sum(w[k] * v[j] for k, v in enumerate(tight)) for j in range(r)]
                if all(dot(g, f) != 0 for g in walls if tuple(g) not in parallel):
                    break
            crossings = []
            for g in walls:
                gf, gx = dot(g, f), dot(g, x)
                if gf != 0 and gx != 0 and gf / gx > 0:
                    crossings.append(gf / gx)
            eps = min(crossings) / 2 if crossings else Fraction(1)
            y = [fj - eps * xj for fj, xj in zip(f, x)]
            if not is_A_regular(A, y):
                continue
            sig = signature(A, y)
            if sig not in found:
                nxt = _chamber_from_signature(A, sig)
                found[sig] = nxt
                queue.append(nxt)
    return tuple(sorted(found.values(), key=Chamber.sort_key))


# ---------------------------------------------------------------- flags


@dataclass(frozen=True)
class Flag:
    """A flag F_1 < ... < F_r of subspaces spanned by elements of A."""

    prefix_generators: tuple[frozenset[int], ...]
    kappas: tuple[tuple[int, ...], ...]
    adapted_basis: tuple[tuple[int, ...], ...]
    proper: bool
    nu: Optional[int]

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.prefix_generators)

    def with_basis(self, basis: Sequence[Sequence[int]]) -> "Flag":
        return Flag(self.prefix_generators, self.kappas, tuple(tuple(v) for v in basis), self.proper, self.nu)

    def to_json(self):
        return {
            "prefix_generators": [[i + 1 for i in sorted(s)] for s in self.prefix_generators],
            "kappas": [[str(x) for x in k] for k in self.kappas],
            "adapted_basis": [[str(x) for x in g] for g in self.adapted_basis],
            "proper": self.proper,
            "nu": self.nu,
        }


def adapted_basis(chain_vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Unimodular basis gamma_1..gamma_r of Z^r with span(gamma_<=j) = span(v_<=j).

    chain_vectors v_1..v_r is any basis with the right prefix spans.  The
    lattice of coefficient rows c with c V integral is put in a lower
    echelon Hermite form; the last vector is sign-corrected to det +1.
    """
    V = [[Fraction(x) for x in v] for v in chain_vectors]
    r = len(V)
    Vinv = inverse(V)
    D = 1
    for row in Vinv:
        for x in row:
            D = D * x.denominator // _gcd(D, x.denominator)
    M = [[int(x * D) for x in reversed(row)] for row in Vinv]
    H, _ = hermite_normal_form(M)
    G = [list(reversed(row)) for row in reversed(H[:r])]
    gammas = [[int(x) for x in row] for row in (
        [[x / D for x in rowv] for rowv in matmul(G, V)]
    )]
    if det(gammas) < 0:
        gammas[-1] = [-x for x in gammas[-1]]
    return gammas


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@lru_cache(maxsize=256)
def _enumerate_flags_cached(A: tuple, orientation: int) -> tuple[Flag, ...]:
    r = len(A[0])
    n = len(A)
    chains = []

    def extend(index_sets, reps):
        j = len(index_sets)
        if j == r:
            chains.append((tuple(index_sets), tuple(reps)))
            return
        prev = index_sets[-1] if index_sets else frozenset()
        seen = set()
        for k in range(n):
            if k in prev:
                continue
            span_rows = [list(A[i]) for i in prev] + [list(A[k])]
            if rank(span_rows) != j + 1:
                continue
            members = frozenset(i for i in range(n) if rank(span_rows + [list(A[i])]) == j + 1)
            if members in seen:
                continue
            seen.add(members)
            extend(index_sets + [members], reps + [A[k]])

    extend([], [])
    flags = []
    for sets, reps in chains:
        kappas = tuple(tuple(sum(A[i][c] for i in s) for c in range(r)) for s in sets)
        proper = rank([list(k) for k in kappas]) == r
        nu = None
        if proper:
            nu = (1 if det([list(k) for k in kappas]) > 0 else -1) * orientation
        basis = adapted_basis(reps)
        flags.append(Flag(sets, kappas, tuple(tuple(g) for g in basis), proper, nu))
    flags.sort(key=lambda F: F.key)
    return tuple(flags)


def enumerate_flags(A, orientation: int = 1) -> list[Flag]:
    A = as_tuple_config(A)
    _check_spanning(A)
    return list(_enumerate_flags_cached(A, orientation))


def basis_variant(F: Flag, seed: int) -> Flag:
    """Same flag with another adapted basis: a random unimodular lower-triangular change."""
    rng = random.Random(seed)
    r = len(F.adapted_basis)
    signs = [rng.choice((1, -1)) for _ in range(r)]
    if r > 0 and (signs.count(-1) % 2):
        signs[-1] = -signs[-1]
    L = [[signs[i] if i == j else (rng.randint(-3, 3) if j < i else 0) for j in range(r)] for i in range(r)]
    return F.with_basis(matmul(L, [list(g) for g in F.adapted_basis]))


@dataclass(frozen=True)
class FlagCoefficients:
    """Representation data of xi in the cone of a flag."""

    flag: Flag
    m: Optional[tuple[Fraction, ...]]
    intervals: tuple[tuple[Optional[Fraction], Optional[Fraction]], ...]

    def to_json(self):
        def s(x):
            return None if x is None else str(x)

        return {
            "flag": self.flag.to_json(),
            "m": None if self.m is None else [str(x) for x in self.m],
            "intervals": [[s(lo), s(hi)] for lo, hi in self.intervals],
        }


def _cone_generators(F: Flag, kappa, mode: str):
    r = len(F.kappas)
    if mode == CLOSED:
        gens = [list(k) for k in F.kappas[: r - 1]] + [list(kappa), [-x for x in kappa]]
    else:
        gens = [list(k) for k in F.kappas]
    return gens


def _coefficient_data(F: Flag, xi, mode: str) -> Optional[FlagCoefficients]:
    r = len(F.kappas)
    kappa = F.kappas[-1]
    if not in_cone(list(xi), _cone_generators(F, kappa, mode)):
        return None
    free = [r - 1] if mode == CLOSED else []
    K = transpose([list(k) for k in F.kappas])
    if F.proper:
        m = tuple(solve(K, list(xi)))
        return FlagCoefficients(F, m, tuple((x, x) for x in m))
    intervals = []
    for j in range(r):
        lo_hi = []
        for sgn in (1, -1):
            c = [0] * r
            c[j] = sgn
            status, value, _ = lp_minimize(c, K, list(xi), free=free)
            lo_hi.append(None if status == "unbounded" else sgn * value)
        intervals.append((lo_hi[0], lo_hi[1]))
    return FlagCoefficients(F, None, tuple(intervals))


def flags_for_xi(A, xi: Sequence, mode: str = CLOSED, orientation: int = 1) -> list[FlagCoefficients]:
    """Flags F with xi in s(F, A) (closed mode) or in s+(F, A) (plus mode)."""
    xi = [Fraction(x) for x in xi]
    out = []
    for F in enumerate_flags(A, orientation):
        data = _coefficient_data(F, xi, mode)
        if data is not None:
            out.append(data)
    return out


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    tau_margin: object  # Fraction, or float +-inf
    witness_flags: tuple[FlagCoefficients, ...]

    def margin_str(self) -> str:
        return str(self.tau_margin)

    def to_json(self):
        return {
            "regular": self.regular,
            "tau_margin": self.margin_str(),
            "witness_flags": [w.to_json() for w in self.witness_flags],
        }


def regularity(A, xi: Sequence, tau=0, mode: str = CLOSED, orientation: int = 1) -> RegularityVerdict:
    """FL-tau-regularity of xi.

    The margin is the smallest coefficient m_j (j < r in closed mode, all j
    in plus mode) over all representations of xi in the cones of the flags
    of FL(A, xi).  For flags with dependent kappas this is the exact LP
    minimum over the set of representations.
    """
    tau = Fraction(tau)
    data = flags_for_xi(A, xi, mode, orientation)
    if not data:
        return RegularityVerdict(True, math.inf, ())
    r = len(data[0].flag.kappas)
    checked = range(r - 1) if mode == CLOSED else range(r)
    margin = math.inf
    for fc in data:
        for j in checked:
            lo = fc.intervals[j][0]
            margin = min(margin, -math.inf if lo is None else lo)
    return RegularityVerdict(margin > tau, margin, tuple(data))


def polar_cone_lattice_points(c: Chamber, xi_ref: Sequence, D) -> list[tuple[int, ...]]:
    """Integer points of the polar cone of c with <xi_ref, lam> <= D."""
    xi_ref = [Fraction(x) for x in xi_ref]
    D = Fraction(D)
    r = c.dim
    gens = c.polar_rays()
    vals = [dot(xi_ref, w) for w in gens]
    if any(v <= 0 for v in vals):
        raise UnboundedSlice("xi_ref is not interior to the chamber")
    if D < 0:
        return []
    verts = [[Fraction(0)] * r] + [[D * x / v for x in w] for w, v in zip(gens, vals)]
    lo = [floor(min(p[k] for p in verts)) for k in range(r)]
    hi = [ceil(max(p[k] for p in verts)) for k in range(r)]
    out = []
    for lam in product(*[range(lo[k], hi[k] + 1) for k in range(r)]):
        if dot(xi_ref, lam) <= D and all(dot(rho, lam) >= 0 for rho in c.rays):
            out.append(tuple(lam))
    out.sort(key=lambda lam: (dot(xi_ref, lam), lam))
    return out


def in_polar_cone(c: Chamber, lam: Sequence[int]) -> bool:
    return all(dot(rho, lam) >= 0 for rho in c.rays)
