"""Cayley augmentation of a partitioned configuration and the mixed checks.

For a partition D_1, ..., D_l of the indices of an underlying configuration
(A_, B_) with block sums theta_k, the augmented configuration lives on
a = a_ + R t and reads

    A = [alpha_1, ..., alpha_n, t - theta_1, ..., t - theta_l].

The cone data sit in V = t_ + R^l with mu_i = (beta_i, e_k) for i in D_k,
mu_{n+k} = (0, e_k), grading g = (0, 1, ..., 1) and gamma = (0, 1, ..., 1),
so s = <g, gamma> = l.  The quotient t = V / R gamma uses coordinates
(x, y_1 - y_l, ..., y_{l-1} - y_l).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .chambers import CLOSED, PLUS, Chamber, Flag, enumerate_chambers, enumerate_flags, flags_for_xi, regularity
from .critical import (
    CayleyConeData,
    covering_classes,
    flag_cluster_diagnostics,
    genericity_check,
    local_toric_residue,
    psi,
    solve_binomial,
)
from .errors import InvalidPartition, ToricResidueError
from .lattice import ExactSequenceData, LatticeSpace, VectorConfiguration, generates_lattice
from .linalg import cone_facet_normals, det, dot, in_cone, solve, transpose
from .poly import Poly, generalized_binomial
from .residues import RationalSection, form_poly, iterated_residue, polynomial_in_forms
from .series import coefficient_table
from .toric import partition_polytope


@dataclass(frozen=True)
class MixedProblem:
    under: ExactSequenceData
    partition: tuple[tuple[int, ...], ...]
    theta: tuple[tuple[int, ...], ...]
    chamber: Optional[Chamber]
    cone: CayleyConeData

    @property
    def augmented(self) -> ExactSequenceData:
        return self.cone.seq

    @property
    def l(self) -> int:
        return len(self.partition)

    def z_tilde(self, z) -> np.ndarray:
        return np.concatenate([np.asarray(z, dtype=complex), np.ones(self.l, dtype=complex)])

    def to_json(self):
        return {
            "under": self.under.to_json(),
            "partition": [[i + 1 for i in D] for D in self.partition],
            "theta": [[str(x) for x in th] for th in self.theta],
            "chamber": None if self.chamber is None else self.chamber.to_json(),
            "augmented": self.augmented.to_json(),
            "cone": self.cone.to_json(),
        }


def validate_partition(n: int, partition: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """0-based blocks; raises InvalidPartition unless they are nonempty, disjoint and cover."""
    blocks = []
    seen: set[int] = set()
    for D in partition:
        D = tuple(sorted(int(i) for i in D))
        if not D:
            raise InvalidPartition("empty block")
        for i in D:
            if i < 0 or i >= n:
                raise InvalidPartition(f"index {i + 1} out of range 1..{n}")
            if i in seen:
                raise InvalidPartition(f"index {i + 1} appears in two blocks")
            seen.add(i)
        blocks.append(D)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise InvalidPartition(f"indices {[i + 1 for i in missing]} are not covered")
    return tuple(blocks)


def block_sums(A, partition) -> list[tuple[int, ...]]:
    r = len(A[0])
    return [tuple(sum(A[i][k] for i in D) for k in range(r)) for D in partition]


def check_c_partition(under, partition, c: Chamber) -> bool:
    """Every theta_k lies in the closure of c."""
    A = under.A.vectors if isinstance(under, ExactSequenceData) else under
    parts = validate_partition(len(A), partition)
    return all(c.closure_contains(th) for th in block_sums(A, parts))


def _c_partition_chamber(A, theta) -> Optional[Chamber]:
    for ch in enumerate_chambers(A):
        if all(ch.closure_contains(th) for th in theta):
            return ch
    return None


def build_cayley(under: ExactSequenceData, partition, chamber: Optional[Chamber] = None) -> MixedProblem:
    """Augmented configuration, cone data and exact sequence for a partition.

    ``partition`` is 0-based.  When no chamber is given, the first chamber
    whose closure contains every theta_k is used (None if there is none).
    """
    Au = under.A.vectors
    Bu = under.B.vectors
    n_, r_, d_ = under.n, under.r, under.d
    parts = validate_partition(n_, partition)
    l = len(parts)
    theta = block_sums(Au, parts)
    block_of = {i: k for k, D in enumerate(parts) for i in D}

    A = [tuple(a) + (0,) for a in Au] + [tuple(-x for x in th) + (1,) for th in theta]
    mu = []
    for i in range(n_):
        e = [0] * l
        e[block_of[i]] = 1
        mu.append(tuple(Bu[i]) + tuple(e))
    for k in range(l):
        e = [0] * l
        e[k] = 1
        mu.append((0,) * d_ + tuple(e))
    g = (0,) * d_ + (1,) * l
    gamma = (0,) * d_ + (1,) * l
    s = dot(g, gamma)

    def to_t(v):
        y = v[d_:]
        return tuple(v[:d_]) + tuple(y[k] - y[l - 1] for k in range(l - 1))

    B = [to_t(m) for m in mu]
    n, r, d = n_ + l, r_ + 1, d_ + l - 1

    for a_idx in range(r):
        for b_idx in range(d):
            if sum(A[i][a_idx] * B[i][b_idx] for i in range(n)) != 0:
                raise ToricResidueError("augmented A and B are not orthogonal")
    if not generates_lattice([list(a) for a in A], r):
        raise ToricResidueError("augmented A does not generate the dual lattice")
    if d and not generates_lattice([list(b) for b in B], d):
        raise ToricResidueError("augmented B does not generate its lattice")
    kappa = tuple(sum(a[k] for a in A) for k in range(r))
    if kappa != (0,) * r_ + (l,):
        raise ToricResidueError(f"kappa_A = {kappa} differs from l t")
    normals = cone_facet_normals([list(m) for m in mu], d_ + l)
    if not all(dot(h, gamma) > 0 for h in normals):
        raise ToricResidueError("gamma is not interior to the Cayley cone")

    seq = ExactSequenceData(
        a_space=LatticeSpace(r),
        g_space=LatticeSpace(n),
        t_space=LatticeSpace(d),
        inclusion_matrix=tuple(A),
        projection_matrix=tuple(tuple(row) for row in transpose([list(b) for b in B])) if d else (),
        A=VectorConfiguration(LatticeSpace(r), tuple(A)),
        B=VectorConfiguration(LatticeSpace(d), tuple(B)),
    )
    cone = CayleyConeData(tuple(mu), g, gamma, s, seq)
    if chamber is None:
        chamber = _c_partition_chamber(Au, theta)
    return MixedProblem(under, parts, tuple(theta), chamber, cone)


def _require_c_partition(problem: MixedProblem) -> Chamber:
    c = problem.chamber
    if c is None or not all(c.closure_contains(th) for th in problem.theta):
        raise InvalidPartition("the partition is not a c-partition for any chamber")
    return c


# ------------------------------------------------ dual polytopes


def _h_vertices(normals, rhs, dim):
    """Vertices of {y : <x, y> >= rhs_x} by choosing dim tight rows."""
    verts = set()
    for sub in combinations(range(len(normals)), dim):
        M = [list(normals[i]) for i in sub]
        if det(M) == 0:
            continue
        y = solve(M, [rhs[i] for i in sub])
        if all(dot(x, y) >= b for x, b in zip(normals, rhs)):
            verts.add(tuple(y))
    return sorted(verts)


def check_pibar(under: ExactSequenceData, partition, c: Chamber) -> dict:
    """Compare the inequality description of each dual polytope with its hull description.

    Pi_s are the vertices of the partition polytope of theta_s shifted by
    the indicator of D_s, written in t_^* coordinates.  The k-th dual
    polytope is {y : <x, y> >= -delta_ks for x a vertex of Pi_s, all s}
    and should equal conv({0} and beta_i for i in D_k).
    """
    parts = validate_partition(under.n, partition)
    if not check_c_partition(under, parts, c):
        raise InvalidPartition("check_pibar requires a c-partition")
    Au, Bu = under.A.vectors, under.B.vectors
    d_ = under.d
    theta = block_sums(Au, parts)
    Bm = [list(b) for b in Bu]
    pis = []
    for s_idx, (D, th) in enumerate(zip(parts, theta)):
        poly = partition_polytope(Au, th)
        ind = [1 if i in D else 0 for i in range(under.n)]
        pts = []
        for v in poly.vertices:
            x = solve(Bm, [vi - bi for vi, bi in zip(v, ind)])
            if x is None:
                raise ToricResidueError("shifted vertex is not in the image of t^*")
            pts.append(tuple(x))
        pis.append(pts)
    report = {"blocks": [], "all_equal": True}
    for k, D in enumerate(parts):
        normals, rhs = [], []
        for s_idx, pts in enumerate(pis):
            for x in pts:
                normals.append(x)
                rhs.append(Fraction(-1 if s_idx == k else 0))
        hull = [tuple(Fraction(0) for _ in range(d_))] + [tuple(Fraction(x) for x in Bu[i]) for i in D]
        bounded = all(
            in_cone(e, [list(x) for x in normals])
            for j in range(d_)
            for e in ([Fraction(int(i == j)) for i in range(d_)], [Fraction(-int(i == j)) for i in range(d_)])
        )
        verts = _h_vertices(normals, rhs, d_) if bounded else []
        v_in_h = all(dot(x, p) >= b for p in hull for x, b in zip(normals, rhs))
        h_in_v = bounded and all(in_cone(list(v) + [1], [list(p) + [1] for p in hull]) for v in verts)
        equal = bool(bounded and v_in_h and h_in_v)
        report["blocks"].append({
            "k": k + 1,
            "bounded": bounded,
            "h_vertices": [[str(x) for x in v] for v in verts],
            "hull_points": [[str(x) for x in p] for p in hull],
            "hull_inside_halfspaces": v_in_h,
            "vertices_inside_hull": h_in_v,
            "equal": equal,
        })
        report["all_equal"] = report["all_equal"] and equal
    return report


# ------------------------------------------------ flags


def _lift_key(key, n: int):
    return tuple(key) + (tuple(range(n)),)


def flag_bijection_check(problem: MixedProblem, xi_under: Sequence, b_values: Sequence = (0, 1, -1)) -> dict:
    """FL(A_, xi_) against FL(A, xi_ + b t) under F_ -> (F_, a^*), for each b."""
    Au = problem.under.A.vectors
    A = problem.augmented.A.vectors
    n = len(A)
    xi_under = [Fraction(x) for x in xi_under]
    under_closed = flags_for_xi(Au, xi_under, CLOSED)
    under_plus = flags_for_xi(Au, xi_under, PLUS)
    lifted = {_lift_key(fc.flag.key, n) for fc in under_closed}
    reg_under = regularity(Au, xi_under, 0, PLUS)
    report = {
        "xi_under": [str(x) for x in xi_under],
        "under_flags": len(under_closed),
        "under_closed_equals_plus": {fc.flag.key for fc in under_closed} == {fc.flag.key for fc in under_plus},
        "under_regularity": reg_under.to_json()["regular"],
        "under_margin": reg_under.margin_str(),
        "cases": [],
        "bijection": True,
    }
    for b in b_values:
        xi = xi_under + [Fraction(b)]
        aug = flags_for_xi(A, xi, CLOSED)
        keys = {fc.flag.key for fc in aug}
        reg_aug = regularity(A, xi, 0, CLOSED)
        ok = keys == lifted and len(aug) == len(under_closed)
        transfer = reg_aug.regular == reg_under.regular and reg_aug.tau_margin == reg_under.tau_margin
        report["cases"].append({
            "b": str(b),
            "augmented_flags": len(aug),
            "bijection": ok,
            "regularity_transfer": transfer,
            "augmented_margin": reg_aug.margin_str(),
        })
        report["bijection"] = report["bijection"] and ok
    report["regularity_transfer"] = all(case["regularity_transfer"] for case in report["cases"])
    return report


def augmented_flag(problem: MixedProblem, F_under: Flag) -> Flag:
    """The flag (F_, a^*) of the augmented configuration."""
    key = _lift_key(F_under.key, problem.augmented.n)
    for F in enumerate_flags(problem.augmented.A.vectors):
        if F.key == key:
            return F
    raise ToricResidueError(f"no augmented flag with key {key}")


# ------------------------------------------------ m = 0 selection


def _t_zero_coefficient(theta, lam, m, r_: int) -> Poly:
    """Coefficient of t^0 in prod_k (t - theta_k)^{<theta_k, lam> - m}, expanded in theta/t."""
    es = [dot(th, lam) - m for th in theta]
    E = sum(es)
    out = Poly.zero(r_)
    if E < 0:
        return out

    def rec(k, left, acc):
        nonlocal out
        if k == len(es):
            if left == 0:
                out = out + acc
            return
        for j in range(left + 1):
            c = generalized_binomial(es[k], j)
            if c == 0:
                continue
            rec(k + 1, left - j, acc * (form_poly([-x for x in theta[k]]) ** j).scale(c))

    rec(0, E, Poly.constant(r_, 1))
    return out


def _under_section(A, P: Poly, lam, extra: Poly) -> RationalSection:
    num = polynomial_in_forms(P, A) * extra
    exps = []
    for a in A:
        e = dot(a, lam) + 1
        if e < 0:
            num = num * form_poly(a) ** (-e)
        exps.append(max(e, 0))
    return RationalSection(num, tuple(exps), tuple(tuple(Fraction(x) for x in a) for a in A))


def a_coefficient_series(problem: MixedProblem, F_under: Flag, P: Poly, lam, m: int) -> Fraction:
    """a(F, lam + m gamma) by extracting the t^0 coefficient then taking Res over F_."""
    Au = problem.under.A.vectors
    r_ = problem.under.r
    extra = _t_zero_coefficient(problem.theta, lam, m, r_)
    if extra.is_zero():
        return Fraction(0)
    return iterated_residue(_under_section(Au, _pad(P, len(Au)), lam, extra), F_under)


def a_coefficient_direct(problem: MixedProblem, F: Flag, P: Poly, lam, m: int) -> Fraction:
    """a(F, lam + m gamma) as one iterated residue over the augmented flag.

    The integrand is P(alpha_(u)) / (t p_lam(u) prod (t - theta_k)^{m - <theta_k, lam>} prod alpha_i(u))
    with t as an extra linear form.
    """
    Au = problem.under.A.vectors
    r = problem.augmented.r
    n_ = len(Au)
    forms_u = [tuple(a) + (0,) for a in Au]
    num = polynomial_in_forms(_pad(P, n_), forms_u)
    exps = []
    for a in Au:
        e = dot(a, lam) + 1
        if e < 0:
            num = num * form_poly(list(a) + [0]) ** (-e)
        exps.append(max(e, 0))
    forms = list(forms_u)
    for th in problem.theta:
        f = tuple(-x for x in th) + (1,)
        e = m - dot(th, lam)
        if e < 0:
            num = num * form_poly(f) ** (-e)
        exps.append(max(e, 0))
        forms.append(f)
    forms.append((0,) * (r - 1) + (1,))
    exps.append(1)
    phi = RationalSection(num, tuple(exps), tuple(tuple(Fraction(x) for x in f) for f in forms))
    return iterated_residue(phi, F)


def m_zero_check(
    problem: MixedProblem,
    F_under: Flag,
    P: Poly,
    lam: Sequence[int],
    m_range: Sequence[int] = (-2, -1, 0, 1, 2),
) -> dict:
    """a(F, lam + m gamma) over m by two routes; zero for m != 0.

    Route "series" takes the t^0 coefficient symbolically and then the
    iterated residue over the underlying flag; route "direct" is a single
    iterated residue over the augmented flag.
    """
    lam = tuple(int(x) for x in lam)
    F = augmented_flag(problem, F_under)
    rows = []
    ok = True
    for m in m_range:
        a1 = a_coefficient_series(problem, F_under, P, lam, m)
        a2 = a_coefficient_direct(problem, F, P, lam, m)
        agree = a1 == a2
        vanishes = a1 == 0 if m != 0 else True
        ok = ok and agree and vanishes
        rows.append({"m": m, "series_route": str(a1), "direct_route": str(a2), "agree": agree, "zero_ok": vanishes})
    return {
        "lambda": list(lam),
        "flag": F_under.to_json()["prefix_generators"],
        "nu": F_under.nu,
        "values": rows,
        "at_zero": next((Fraction(row["series_route"]) for row in rows if row["m"] == 0), None),
        "ok": ok,
    }


def signed_a_sum(problem: MixedProblem, xi_under: Sequence, P: Poly, lam, m: int = 0) -> Fraction:
    """sum over FL+(A_, xi_) of nu(F) a(F, lam + m gamma)."""
    total = Fraction(0)
    for fc in flags_for_xi(problem.under.A.vectors, xi_under, PLUS):
        total += fc.flag.nu * a_coefficient_series(problem, fc.flag, P, lam, m)
    return total


def _pad(P: Poly, n: int) -> Poly:
    if P.nvars >= n:
        return P
    return Poly(n, {e + (0,) * (n - P.nvars): c for e, c in P.terms.items()})


# ------------------------------------------------ end-to-end verification


def _rational(x: float, denominator: int = 10**6) -> Fraction:
    return Fraction(float(x)).limit_denominator(denominator)


def _divergence(partials: list[complex]) -> dict:
    mags = [abs(p) for p in partials]
    tail = mags[len(mags) // 2:]
    increasing = len(tail) > 2 and all(b > a for a, b in zip(tail, tail[1:]))
    last_terms = [abs(b - a) for a, b in zip(partials, partials[1:])][-5:]
    growth = None
    if len(last_terms) >= 2 and last_terms[-2] > 0:
        growth = last_terms[-1] / last_terms[-2]
    return {
        "terms": len(partials),
        "last_term_magnitudes": last_terms,
        "term_ratio": growth,
        "magnitudes_increasing": increasing,
        "diverging": bool(increasing and (growth is not None and growth >= 1.0)),
    }


def _residue_side(problem: MixedProblem, P: Poly, z, seed: int):
    zt = problem.z_tilde(z)
    seq = problem.augmented
    crit = solve_binomial(seq, zt, seed=seed)
    value = local_toric_residue(seq, _pad(P, seq.n), zt, s=problem.cone.s, crit=crit, seed=seed)
    Am = np.array(seq.A.vectors, dtype=float)
    egamma = [abs(np.prod(Am[problem.under.n:] @ u) - 1) for u in crit.points]
    return value, crit, (max(egamma) if egamma else 0.0)


def verify_mtrmc(
    problem: MixedProblem,
    P: Poly,
    z,
    D=20,
    tol: float = 1e-8,
    ray: Sequence[float] = (0.5, 1.0, 1.5),
    threads: int = 1,
    seed: int = 0,
    xi_ref=None,
) -> dict:
    """Series side against local toric residue of the augmented problem at z.

    The verdict is decided at z itself; the other points z * s on the ray
    are reported as convergence evidence.
    """
    c = _require_c_partition(problem)
    n_ = problem.under.n
    P = _pad(P, n_)
    if not P.is_homogeneous() or P.degree() != problem.under.d:
        raise ValueError(f"P must be homogeneous of degree {problem.under.d}")
    z = np.asarray(z, dtype=complex)

    def series_side():
        return coefficient_table(problem.under, c, problem.theta, P, D, xi_ref, True, threads, seed)

    with ThreadPoolExecutor(max_workers=2) as pool:
        fut_series = pool.submit(series_side)
        fut_res = pool.submit(_residue_side, problem, P, z, seed)
        table = fut_series.result()
        residue, crit, egamma = fut_res.result()

    series_value = table.evaluate(z)
    abs_gap = abs(series_value - residue)
    rel_gap = abs_gap / max(abs(residue), 1e-300)
    partials = table.partial_sums(z)
    divergence = _divergence(partials)

    ray_rows = []
    for s in ray:
        zs = z * s
        try:
            res_s = _residue_side(problem, P, zs, seed)[0]
            ser_s = table.evaluate(zs)
            ray_rows.append({
                "scale": s,
                "series": [ser_s.real, ser_s.imag],
                "residue": [res_s.real, res_s.imag],
                "abs_gap": abs(ser_s - res_s),
                "diverging": _divergence(table.partial_sums(zs))["diverging"],
            })
        except ToricResidueError as exc:
            ray_rows.append({"scale": s, "error": f"{type(exc).__name__}: {exc}"})

    xi_f = psi(problem.under.A.vectors, z)
    xi_q = [_rational(x) for x in xi_f]
    reg = regularity(problem.under.A.vectors, xi_q, 0, PLUS)
    genericity = genericity_check(problem.cone, problem.z_tilde(z), seed=seed)
    diagnostics = {
        "psi_under": [float(x) for x in xi_f],
        "psi_in_chamber": c.contains(xi_q),
        "regularity_margin": reg.margin_str(),
        "num_critical_points": len(crit),
        "covering_classes": covering_classes(crit, problem.augmented.A.vectors),
        "e_gamma_max_deviation": egamma,
        "divergence": divergence,
        "ray": ray_rows,
        "genericity": genericity,
        "flag_clusters": flag_cluster_diagnostics(problem.augmented, crit),
        "sign_convention": "series terms carry (-1)^<kappa_, lambda>",
    }
    verdict = "PASS" if abs_gap <= tol and not divergence["diverging"] else "FAIL"
    failures = []
    if divergence["diverging"]:
        failures.append("series diverges at z (outside the convergence domain)")
    if abs_gap > tol:
        failures.append(f"gap {abs_gap:.3e} exceeds tolerance {tol:.1e}")
    failures.extend(genericity.get("failures", []))
    return {
        "series_value": [series_value.real, series_value.imag],
        "residue_value": [residue.real, residue.imag],
        "abs_gap": abs_gap,
        "rel_gap": rel_gap,
        "coefficients": table.to_json(z)["entries"],
        "diagnostics": diagnostics,
        "failures": failures,
        "verdict": verdict,
    }


def verify_trmc(under: ExactSequenceData, P: Poly, z, chamber: Optional[Chamber] = None, **kwargs) -> dict:
    """The single-block case of verify_mtrmc."""
    problem = build_cayley(under, [list(range(under.n))], chamber)
    return verify_mtrmc(problem, P, z, **kwargs)
