"""Critical points of the binomial system and the local toric residue.

The set O(z, A) consists of the u in a_C with every alpha_i(u) nonzero and
p_lam(u) = z^lam for all lattice vectors lam.  With a basis lam_1..lam_r
of a_Z adapted to kappa (<kappa, lam_1> = g, <kappa, lam_j> = 0 otherwise)
the equations for j >= 2 are homogeneous of degree zero, so they are
solved first on projective space, and the first equation then fixes the
scale up to a g-th root of unity.  Every candidate is polished by Newton
iteration on the full system.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .chambers import CLOSED, Flag, as_tuple_config, flags_for_xi, regularity
from .errors import DegenerateCriticalPoint, SolveFailed, UnsupportedRank, ZeroCoordinate
from .lattice import ExactSequenceData, LatticeSpace, hermite_normal_form, kernel_basis
from .linalg import dot, rank, rational_kernel, solve, transpose
from .poly import Poly
from .toric import g_polynomial


@dataclass(frozen=True)
class CayleyConeData:
    """The cone C = Cone(mu) in V with grading g, interior gamma and s = <g, gamma>."""

    mu: tuple[tuple[int, ...], ...]
    g: tuple[int, ...]
    gamma: tuple[int, ...]
    s: int
    seq: ExactSequenceData

    @property
    def V_space(self) -> LatticeSpace:
        return LatticeSpace(len(self.g))

    def to_json(self):
        return {
            "mu": [[str(x) for x in m] for m in self.mu],
            "g": [str(x) for x in self.g],
            "gamma": [str(x) for x in self.gamma],
            "s": self.s,
        }


def _cplx(x) -> list[float]:
    x = complex(x)
    return [x.real, x.imag]


@dataclass
class CriticalSet:
    points: list[np.ndarray]
    residuals: list[float]
    z: np.ndarray
    basis: list[list[int]]
    discarded: list[np.ndarray] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def to_json(self):
        return {
            "points": [[_cplx(x) for x in u] for u in self.points],
            "residuals": list(self.residuals),
            "z": [_cplx(x) for x in self.z],
            "basis": [[str(x) for x in lam] for lam in self.basis],
            "discarded": [[_cplx(x) for x in u] for u in self.discarded],
        }


def _config(seq) -> tuple[tuple[int, ...], ...]:
    if isinstance(seq, ExactSequenceData):
        return seq.A.vectors
    return as_tuple_config(seq)


def _check_z(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape != (n,):
        raise ValueError(f"z must have {n} entries")
    zero = [i + 1 for i in range(n) if z[i] == 0]
    if zero:
        raise ZeroCoordinate(f"z has vanishing coordinates at indices {zero}")
    return z


def psi(A, z) -> np.ndarray:
    """psi(z) = -sum log|z_i| alpha_i."""
    A = _config(A)
    z = _check_z(z, len(A))
    Am = np.array(A, dtype=float)
    return -(np.log(np.abs(z)) @ Am)


def monomial(z: np.ndarray, exps: Sequence[int]) -> complex:
    """prod z_i^{e_i} for integer exponents."""
    out = complex(1)
    for zi, e in zip(z, exps):
        if e:
            out *= zi ** int(e)
    return out


def kappa_basis(kappa: Sequence[int]) -> tuple[list[list[int]], int]:
    """Unimodular rows lam_1..lam_r with <kappa, lam_1> = gcd and the rest 0."""
    H, U = hermite_normal_form([[int(k)] for k in kappa])
    return U, H[0][0]


# ------------------------------------------------ projective sub-solver


def _poly1_product(factors) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for (a, b), e in factors:
        for _ in range(e):
            out = npoly.polymul(out, np.array([a, b]))
    return out


def _poly2_mul(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    out = np.zeros((P.shape[0] + Q.shape[0] - 1, P.shape[1] + Q.shape[1] - 1), dtype=complex)
    for a in range(Q.shape[0]):
        for b in range(Q.shape[1]):
            if Q[a, b] != 0:
                out[a:a + P.shape[0], b:b + P.shape[1]] += Q[a, b] * P
    return out


def _poly2_product(factors) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for (a, b, c), e in factors:
        lin = np.array([[a, c], [b, 0]], dtype=complex)
        for _ in range(e):
            out = _poly2_mul(out, lin)
    return out


def _pad2(P: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=complex)
    out[: P.shape[0], : P.shape[1]] = P
    return out


def _eval2(P: np.ndarray, y1: complex, y2: complex) -> complex:
    return npoly.polyval(y2, npoly.polyval(y1, P))


def _sylvester_det(p: np.ndarray, q: np.ndarray) -> complex:
    """Resultant of two univariate polynomials given by ascending coefficients."""
    m, n = len(p) - 1, len(q) - 1
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    S = np.zeros((m + n, m + n), dtype=complex)
    pd, qd = p[::-1], q[::-1]
    for i in range(n):
        S[i, i:i + m + 1] = pd
    for i in range(m):
        S[n + i, i:i + n + 1] = qd
    return np.linalg.det(S)


def _trim(c: np.ndarray, rel: float = 1e-13) -> np.ndarray:
    c = np.array(c, dtype=complex)
    big = np.max(np.abs(c)) if len(c) else 0.0
    while len(c) > 1 and abs(c[-1]) <= rel * big:
        c = c[:-1]
    return c


def _solve_projective(forms: np.ndarray, E: np.ndarray, q: np.ndarray, rng: np.random.Generator) -> list[np.ndarray]:
    """All v in P^{k-1} with prod_i forms_i(v)^{E_ij} = q_j, j < k-1.

    forms is m x k, E is m x (k-1) with zero column sums.  Supports k <= 3.
    Solutions with a vanishing form are kept; callers filter them.
    """
    m, k = forms.shape
    if k == 1:
        return [np.array([1.0 + 0j])]
    if k == 2:
        p = rng.normal(size=2) + 1j * rng.normal(size=2)
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        a, b = forms @ p, forms @ d
        pos = [((a[i], b[i]), int(E[i, 0])) for i in range(m) if E[i, 0] > 0]
        neg = [((a[i], b[i]), int(-E[i, 0])) for i in range(m) if E[i, 0] < 0]
        f = npoly.polysub(_poly1_product(pos), q[0] * _poly1_product(neg))
        f = _trim(f)
        if len(f) <= 1:
            raise SolveFailed("degree-zero equation degenerated to a constant")
        return [p + y * d for y in npoly.polyroots(f)]
    if k == 3:
        p = rng.normal(size=3) + 1j * rng.normal(size=3)
        d1 = rng.normal(size=3) + 1j * rng.normal(size=3)
        d2 = rng.normal(size=3) + 1j * rng.normal(size=3)
        a, b, c = forms @ p, forms @ d1, forms @ d2
        eqs = []
        for j in range(2):
            pos = [((a[i], b[i], c[i]), int(E[i, j])) for i in range(m) if E[i, j] > 0]
            neg = [((a[i], b[i], c[i]), int(-E[i, j])) for i in range(m) if E[i, j] < 0]
            P1, P2 = _poly2_product(pos), _poly2_product(neg)
            shape = (max(P1.shape[0], P2.shape[0]), max(P1.shape[1], P2.shape[1]))
            eqs.append(_pad2(P1, shape) - q[j] * _pad2(P2, shape))
        F1, F2 = eqs
        D1, D2 = F1.shape[1] - 1, F2.shape[1] - 1
        N = D1 * D2 + 1
        samples = np.exp(2j * np.pi * np.arange(N) / N)
        vals = np.array([
            _sylvester_det(_trim(npoly.polyval(y, F1), 0.0), _trim(npoly.polyval(y, F2), 0.0)) for y in samples
        ])
        res = _trim(np.fft.fft(vals) / N, 1e-10)
        if len(res) <= 1:
            raise SolveFailed("resultant vanished identically")
        sols = []
        for y1 in npoly.polyroots(res):
            g1 = _trim(npoly.polyval(y1, F1))
            if len(g1) <= 1:
                continue
            best = []
            for y2 in npoly.polyroots(g1):
                scale = _eval2(np.abs(F2), abs(y1), abs(y2)) or 1.0
                best.append((abs(_eval2(F2, y1, y2)) / scale, y2))
            best.sort(key=lambda t: t[0])
            for err, y2 in best:
                if err < 1e-6 or err == best[0][0] and err < 1e-3:
                    sols.append(p + y1 * d1 + y2 * d2)
        return sols
    raise UnsupportedRank(f"projective systems in {k} variables are not supported")


# ------------------------------------------------ main solver


def _newton(A: np.ndarray, E: np.ndarray, q: np.ndarray, u: np.ndarray, tol: float, iters: int = 60) -> np.ndarray:
    for _ in range(iters):
        alpha = A @ u
        if np.any(alpha == 0):
            break
        logs = np.array([np.sum(E[:, j] * np.log(alpha)) - np.log(q[j]) for j in range(E.shape[1])])
        ratio = np.exp(logs)
        F = ratio - 1.0
        J = (ratio[:, None]) * ((E.T / alpha[None, :]) @ A)
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        u = u + delta
        if np.linalg.norm(delta) <= tol * max(np.linalg.norm(u), 1e-300):
            break
    return u


def solve_binomial(
    seq,
    z,
    tol: float = 1e-12,
    dedup: float = 1e-8,
    torus_cutoff: float = 1e-10,
    seed: int = 0,
) -> CriticalSet:
    """All solutions in U(A) of p_lam(u) = z^lam, for r <= 3."""
    A = _config(seq)
    n, r = len(A), len(A[0])
    if r > 3:
        raise UnsupportedRank(f"rank {r} > 3 is not supported")
    z = _check_z(z, n)
    kappa = [sum(a[k] for a in A) for k in range(r)]
    if all(x == 0 for x in kappa):
        raise SolveFailed("kappa_A vanishes; the system is not of the expected type")
    L, gdeg = kappa_basis(kappa)
    Am = np.array(A, dtype=float)
    E = np.array([[dot(a, lam) for lam in L] for a in A], dtype=int)
    q = np.array([monomial(z, E[:, j]) for j in range(r)])
    rng = np.random.default_rng(seed)
    # projective part in coordinates where the first basis covector of the
    # kappa-adapted lattice is not needed: work directly on a_C
    vs = _solve_projective(Am.astype(complex), E[:, 1:], q[1:], rng) if r > 1 else [np.ones(1, dtype=complex)]
    cands = []
    for v in vs:
        alpha = Am @ v
        if np.any(np.abs(alpha) < torus_cutoff * max(np.max(np.abs(alpha)), 1e-300)):
            cands.append(("discard", v))
            continue
        base = q[0] / np.prod(alpha.astype(complex) ** E[:, 0])
        root = cmath.exp(cmath.log(base) / gdeg)
        for k in range(gdeg):
            s = root * cmath.exp(2j * math.pi * k / gdeg)
            cands.append(("keep", s * v))
    points, residuals, discarded = [], [], []
    for tag, u in cands:
        if tag == "discard":
            discarded.append(u)
            continue
        u = _newton(Am, E, q, u, tol)
        alpha = Am @ u
        scale = max(np.max(np.abs(alpha)), 1e-300)
        if np.any(np.abs(alpha) < torus_cutoff * scale):
            discarded.append(u)
            continue
        res = max(abs(np.prod(alpha ** E[:, j]) - q[j]) / (1 + abs(q[j])) for j in range(r))
        if any(np.linalg.norm(u - w) <= dedup * max(np.linalg.norm(u), np.linalg.norm(w)) for w in points):
            continue
        points.append(u)
        residuals.append(float(res))
    order = sorted(range(len(points)), key=lambda i: (round(points[i][0].real, 9), round(points[i][0].imag, 9), i))
    return CriticalSet([points[i] for i in order], [residuals[i] for i in order], z, [list(l) for l in L], discarded)


def crit_correspondence(seq: ExactSequenceData, u, z=None) -> tuple[np.ndarray, float]:
    """Torus coordinates alpha_i(u) and the size of sum alpha_i(u) beta_i."""
    Am = np.array(seq.A.vectors, dtype=float)
    vals = Am @ np.asarray(u, dtype=complex)
    if seq.d == 0:
        return vals, 0.0
    Bm = np.array(seq.B.vectors, dtype=float)
    rel = float(np.linalg.norm(vals @ Bm) / max(np.linalg.norm(vals), 1e-300))
    return vals, rel


def hessian_direct(seq: ExactSequenceData, u, z=None) -> complex:
    """det of sum_i alpha_i(u) beta_i beta_i^T in the lattice basis of t*."""
    vals = np.array(seq.A.vectors, dtype=float) @ np.asarray(u, dtype=complex)
    Bm = np.array(seq.B.vectors, dtype=float)
    H = (Bm.T * vals) @ Bm
    return complex(np.linalg.det(H))


def log_jacobian_det(A, u) -> complex:
    """det(d log p_{e_j} / d x_k)(u) for the standard basis of the lattice."""
    Am = np.array(_config(A), dtype=float)
    vals = Am @ np.asarray(u, dtype=complex)
    J = (Am.T / vals) @ Am
    return complex(np.linalg.det(J))


def exact_log_jacobian_det(A, u: Sequence[Fraction]) -> Fraction:
    """Exact det(sum_i alpha_i alpha_i^T / alpha_i(u)) at a rational point."""
    from .linalg import det

    A = _config(A)
    r = len(A[0])
    vals = [dot(a, u) for a in A]
    J = [[sum(Fraction(a[j] * a[k]) / v for a, v in zip(A, vals)) for k in range(r)] for j in range(r)]
    return det(J)


def local_toric_residue(
    seq: ExactSequenceData,
    P: Poly,
    z,
    s: int = 1,
    crit: Optional[CriticalSet] = None,
    degenerate_tol: float = 1e-10,
    seed: int = 0,
) -> complex:
    """s * sum over O(z, A) of P(alpha(u)) / (kappa(u) G(u))."""
    if crit is None:
        crit = solve_binomial(seq, z, seed=seed)
    A = seq.A.vectors
    n = len(A)
    if P.nvars < n:
        P = Poly(n, {e + (0,) * (n - P.nvars): c for e, c in P.terms.items()})
    G = g_polynomial(seq)
    kappa = np.array(seq.kappa, dtype=float)
    total = 0j
    for u in crit.points:
        vals = np.array(A, dtype=float) @ u
        scale = float(np.max(np.abs(vals)))
        ku = complex(kappa @ u)
        gu = complex(G.evaluate(list(u)))
        if abs(ku) <= degenerate_tol * scale:
            raise DegenerateCriticalPoint(f"cond1 / f_z vanishes at a critical point: kappa(u) = 0 at u={[_cplx(x) for x in u]}")
        if abs(gu) <= degenerate_tol * scale ** seq.d:
            raise DegenerateCriticalPoint(f"G(u) vanishes at u={[_cplx(x) for x in u]} (cond3 / Hessian vanishing)")
        total += complex(P.evaluate(list(vals))) / (ku * gu)
    return s * total


def covering_classes(crit: CriticalSet, A, tol: float = 1e-8) -> list[list[int]]:
    """Group solutions whose alpha-vectors agree up to a common scalar."""
    Am = np.array(_config(A), dtype=float)
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for idx, u in enumerate(crit.points):
        vals = Am @ u
        k = int(np.argmax(np.abs(vals)))
        normed = vals / vals[k]
        for g, rep in zip(groups, reps):
            if np.linalg.norm(normed - rep) <= tol * np.linalg.norm(rep):
                g.append(idx)
                break
        else:
            groups.append([idx])
            reps.append(normed)
    return groups


# ------------------------------------------------ faces and genericity


def cone_faces(mu: Sequence[Sequence[int]]) -> list[frozenset[int]]:
    """Index sets I(Phi) of the nonzero faces of the full-dimensional cone Cone(mu).

    Facets come from hyperplanes through dim-1 independent generators that
    leave all generators on one side; the other faces are intersections.
    The cone itself is included.
    """
    mu = [list(m) for m in mu]
    dim = len(mu[0])
    n = len(mu)
    if rank(mu) != dim:
        raise ValueError("Cone(mu) must be full-dimensional")
    facets = set()
    for sub in combinations(range(n), dim - 1):
        rows = [mu[i] for i in sub]
        if dim > 1 and rank(rows) != dim - 1:
            continue
        h = rational_kernel(rows, dim)[0] if dim > 1 else [Fraction(1)]
        vals = [dot(h, m) for m in mu]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(i for i in range(n) if vals[i] == 0))
    faces = {frozenset(range(n))}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        nxt = set()
        for f1 in frontier:
            for f2 in facets:
                inter = f1 & f2
                if inter and inter not in faces:
                    nxt.add(inter)
        frontier = nxt
    return sorted(faces, key=lambda f: (-len(f), sorted(f)))


def face_relations(mu: Sequence[Sequence[int]], face: frozenset[int]) -> list[list[int]]:
    """Z-basis of W_Phi: integer relations among the mu_i with i in the face."""
    idx = sorted(face)
    M = transpose([list(mu[i]) for i in idx])
    return kernel_basis(M)


def _orbit_system(forms: np.ndarray, E: np.ndarray, zf: np.ndarray, rng):
    """Common zeros of prod_i forms_i(v)^{E_ij} = prod_i z_i^{E_ij} with all forms_i(v) != 0.

    v runs over the projectivized relation space (columns of forms); the
    columns of E are the integer relations among the mu_i of the face.
    Returns (status, detail): 'PASS' if there is no solution, 'FAIL' if one
    is found, 'UNCHECKED' if the system is outside the supported sizes.
    """
    kr = forms.shape[1]
    k = E.shape[1]
    if kr == 0:
        return "PASS", "no relations on the face"
    if np.any(np.all(forms == 0, axis=1)):
        return "PASS", "a coordinate vanishes on the whole relation space"
    if kr - 1 > k:
        return "UNCHECKED", f"underdetermined system ({kr - 1} unknowns, {k} equations)"
    if kr - 1 > 2:
        return "UNCHECKED", f"relation space of dimension {kr} is too large"
    q = np.array([monomial(zf, E[:, j]) for j in range(k)])
    try:
        vs = _solve_projective(forms.astype(complex), E[:, : kr - 1], q[: kr - 1], rng)
    except (SolveFailed, np.linalg.LinAlgError) as exc:
        return "UNCHECKED", f"elimination failed: {exc}"
    worst = math.inf
    for v in vs:
        vals = forms @ v
        if np.any(np.abs(vals) < 1e-10 * np.max(np.abs(vals))):
            continue
        err = 0.0
        for j in range(kr - 1, k):
            lhs = np.prod(vals.astype(complex) ** E[:, j])
            err = max(err, abs(lhs - q[j]) / (1 + abs(q[j])))
        worst = min(worst, err)
        if err < 1e-8:
            return "FAIL", f"common zero on the orbit (relative residual {err:.3e})"
    return "PASS", f"closest residual {worst:.3e}" if worst < math.inf else "no candidates in the orbit torus"


def genericity_check(cone: CayleyConeData, z, tol: float = 1e-10, seed: int = 0) -> dict:
    """Report on the conditions cond1, cond2, cond3 at the parameter z.

    cond1: on no face Phi (the cone itself included) does sum z_i e_{mu_i} mu_i
    vanish, i.e. (z_i x^{mu_i}) never lies in the relation space W_Phi.
    cond2: on no proper face does it lie in the relations of the images
    beta_i in t = V / R gamma.  cond3: G and kappa are nonzero at every
    solution of the binomial system.
    """
    seq = cone.seq
    n = seq.n
    report = {"faces": [], "conditions": {}, "failures": []}
    z = np.asarray(z, dtype=complex)
    zero = [i + 1 for i in range(n) if z[i] == 0]
    if zero:
        msg = f"ZeroCoordinate: z vanishes at indices {zero}"
        for cond in ("cond1", "cond2", "cond3"):
            report["conditions"][cond] = "FAIL"
            report["failures"].append(f"{cond} / {msg}")
        return report
    rng = np.random.default_rng(seed)
    status_of = {"cond1": "PASS", "cond2": "PASS"}
    Bm = [list(b) for b in seq.B.vectors]
    full = frozenset(range(n))

    def record(cond, status, idx):
        if status == "FAIL":
            status_of[cond] = "FAIL"
            report["failures"].append(f"{cond} / common zero on the face with indices {[i + 1 for i in idx]}")
        elif status == "UNCHECKED" and status_of[cond] == "PASS":
            status_of[cond] = "UNCHECKED"

    for face in cone_faces(cone.mu):
        idx = sorted(face)
        basis = face_relations(cone.mu, face)
        E = np.array(basis, dtype=int).T if basis else np.zeros((len(idx), 0), dtype=int)
        entry = {"indices": [i + 1 for i in idx], "relation_rank": len(basis)}
        s1, d1 = _orbit_system(E.astype(float), E, z[idx], rng) if basis else ("PASS", "no relations on the face")
        entry["cond1"] = {"status": s1, "detail": d1}
        record("cond1", s1, idx)
        if face != full:
            if seq.d:
                K = rational_kernel(transpose([Bm[i] for i in idx]), len(idx))
            else:
                K = [[Fraction(int(i == j)) for i in range(len(idx))] for j in range(len(idx))]
            forms = np.array([[float(v[p]) for v in K] for p in range(len(idx))], dtype=float)
            forms = forms.reshape(len(idx), len(K))
            s2, d2 = _orbit_system(forms, E, z[idx], rng)
            entry["cond2"] = {"status": s2, "detail": d2}
            record("cond2", s2, idx)
        report["faces"].append(entry)
    report["conditions"]["cond1"] = status_of["cond1"]
    report["conditions"]["cond2"] = status_of["cond2"]
    try:
        crit = solve_binomial(seq, z, seed=seed)
    except Exception as exc:
        report["conditions"]["cond3"] = "FAIL"
        report["failures"].append(f"cond3 / solver failure: {exc}")
        return report
    report["num_points"] = len(crit)
    report["discarded_candidates"] = len(crit.discarded)
    G = g_polynomial(seq)
    kappa = np.array(seq.kappa, dtype=float)
    cond3 = "PASS"
    for u in crit.points:
        vals = np.array(seq.A.vectors, dtype=float) @ u
        scale = float(np.max(np.abs(vals)))
        if abs(complex(G.evaluate(list(u)))) <= tol * scale ** seq.d:
            cond3 = "FAIL"
            report["failures"].append("cond3 / Hessian vanishing")
        if abs(complex(kappa @ u)) <= tol * scale:
            cond3 = "FAIL"
            report["failures"].append("cond1 / f_z vanishes at a critical point (kappa(u) = 0)")
    report["conditions"]["cond3"] = cond3
    return report


# ------------------------------------------------ flags and clustering


def tropical_exponents(F: Flag, xi: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """Magnitude exponents along a flag for points of Z(log(eps) * xi).

    Returns (e, m) where |u_j| ~ eps^{e_j} in adapted coordinates and
    xi = sum_j m_j kappa_j with e_j = m_j + ... + m_r.
    """
    K = transpose([list(k) for k in F.kappas])
    m = solve(K, [Fraction(x) for x in xi])
    if m is None:
        raise ValueError("xi is not in the span of the flag's kappas")
    r = len(m)
    e = [sum(m[j:], Fraction(0)) for j in range(r)]
    return e, m


def form_exponents(A, F: Flag, xi: Sequence) -> list[Fraction]:
    """Predicted exponent of |alpha_i| for each i: the level of alpha_i in F."""
    e, _ = tropical_exponents(F, xi)
    out = []
    for i in range(len(_config(A))):
        level = next(j for j, s in enumerate(F.prefix_generators) if i in s)
        out.append(e[level])
    return out


def flag_cluster_diagnostics(seq, crit: CriticalSet, N: float = 1e3, denominator: int = 10**6) -> dict:
    """Assign solutions to the flags of FL(A, psi(z)) by adapted-coordinate ordering."""
    A = _config(seq)
    xi_f = psi(A, crit.z)
    xi = [Fraction(float(x)).limit_denominator(denominator) for x in xi_f]
    verdict = regularity(A, xi, 0, CLOSED)
    flags = [fc.flag for fc in flags_for_xi(A, xi, CLOSED)]
    assignment: dict[tuple, list[int]] = {F.key: [] for F in flags}
    unassigned = []
    for idx, u in enumerate(crit.points):
        hit = None
        for F in flags:
            y = np.array(F.adapted_basis, dtype=float) @ u
            mags = np.abs(y)
            if all(mags[j] * N <= mags[j + 1] for j in range(len(mags) - 1)):
                hit = F
                break
        if hit is None:
            unassigned.append(idx)
        else:
            assignment[hit.key].append(idx)
    return {
        "psi": [float(x) for x in xi_f],
        "regular": verdict.regular,
        "margin": verdict.margin_str(),
        "assignment": {str([[i + 1 for i in s] for s in key]): v for key, v in assignment.items()},
        "unassigned": unassigned,
    }
