"""Generating series side: JK coefficients with theta-power numerators.

The coefficient attached to an integer vector lam of the polar cone is

    JK_c( P(alpha(u)) prod_k theta_k(u)^{<theta_k, lam>} / prod_i alpha_i(u)^{<alpha_i, lam> + 1} )

and the series is summed against z^lam = prod_i z_i^{<alpha_i, lam>}.
Coefficients are exact; only the final summation is done in complex
floating point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .chambers import Chamber, as_tuple_config, in_polar_cone, polar_cone_lattice_points
from .lattice import ExactSequenceData
from .linalg import dot
from .poly import Poly
from .residues import find_regular_xi, form_poly, jk_residue, polynomial_in_forms, section


def _config(seq) -> tuple[tuple[int, ...], ...]:
    if isinstance(seq, ExactSequenceData):
        return seq.A.vectors
    return as_tuple_config(seq)


def _pad(P: Poly, n: int) -> Poly:
    if P.nvars == n:
        return P
    if P.nvars > n:
        raise ValueError(f"P has {P.nvars} variables, expected at most {n}")
    return Poly(n, {e + (0,) * (n - P.nvars): c for e, c in P.terms.items()})


def default_xi_ref(c: Chamber) -> list[Fraction]:
    """Sum of the primitive extreme rays of c, divided by the gcd of its entries."""
    total = [sum(ray[k] for ray in c.rays) for k in range(c.dim)]
    g = 0
    for x in total:
        g = gcd(g, int(x))
    g = g or 1
    return [Fraction(x, g) for x in total]


def kappa_sign(theta_list: Sequence[Sequence[int]], lam: Sequence[int]) -> int:
    """(-1)^{<kappa, lam>} with kappa the sum of the theta_k."""
    return -1 if sum(dot(th, lam) for th in theta_list) % 2 else 1


def _integrand(A, theta_list, P: Poly, lam: Sequence[int]):
    num = polynomial_in_forms(_pad(P, len(A)), A)
    for th in theta_list:
        k = dot(th, lam)
        if k:
            num = num * form_poly(th) ** k
    exps = []
    for a in A:
        e = dot(a, lam) + 1
        if e < 0:
            num = num * form_poly(a) ** (-e)
        exps.append(max(e, 0))
    return section(A, num, exps)


def mp_coefficient(
    seq_under,
    c: Chamber,
    theta_list: Sequence[Sequence[int]],
    P: Poly,
    lam: Sequence[int],
    xi: Optional[Sequence] = None,
    seed: int = 0,
) -> Fraction:
    """JK_c(P prod theta^{<theta,lam>} / prod alpha^{<alpha,lam>+1}), exact.

    Vectors lam outside the polar cone give zero; when every pairing with
    theta is nonnegative the residue is still computed and checked to be 0.
    If some pairing with theta is negative the integrand has poles off the
    arrangement and 0 is returned without computation.
    """
    A = _config(seq_under)
    lam = tuple(int(x) for x in lam)
    if any(dot(th, lam) < 0 for th in theta_list):
        return Fraction(0)
    phi = _integrand(A, theta_list, P, lam)
    if xi is None:
        xi = find_regular_xi(A, c, seed)
    value = jk_residue(phi, c, A, xi=xi)
    if not in_polar_cone(c, lam) and value != 0:
        raise AssertionError(f"nonzero coefficient {value} outside the polar cone at {lam}")
    return value


@dataclass
class SeriesCoefficientTable:
    """Exact coefficients on the polar-cone slice <xi_ref, lam> <= D."""

    entries: dict[tuple[int, ...], Fraction]
    order: list[tuple[int, ...]]
    chamber: Chamber
    theta_list: tuple[tuple[int, ...], ...]
    P: Poly
    A: tuple[tuple[int, ...], ...]
    xi_ref: tuple[Fraction, ...]
    D: Fraction
    sign_twist: bool = True
    xi: Optional[tuple[Fraction, ...]] = None

    def signed(self, lam) -> Fraction:
        v = self.entries[lam]
        if self.sign_twist:
            v = v * kappa_sign(self.theta_list, lam)
        return v

    def z_power(self, z, lam) -> complex:
        out = complex(1)
        for zi, a in zip(z, self.A):
            e = dot(a, lam)
            if e:
                out *= complex(zi) ** int(e)
        return out

    def terms(self, z) -> list[complex]:
        return [complex(self.signed(lam)) * self.z_power(z, lam) for lam in self.order]

    def partial_sums(self, z) -> list[complex]:
        out, acc = [], 0j
        for t in self.terms(z):
            acc += t
            out.append(acc)
        return out

    def evaluate(self, z) -> complex:
        return sum(self.terms(z), 0j)

    def extend(self, D, threads: int = 1, seed: int = 0) -> "SeriesCoefficientTable":
        """Enlarge the slice bound; existing coefficients are reused unchanged."""
        return _fill(self, Fraction(D), threads, seed)

    def to_json(self, z=None):
        rows = []
        acc = 0j
        for lam in self.order:
            row = {"lambda": list(lam), "coefficient": str(self.entries[lam])}
            if self.sign_twist:
                row["sign"] = kappa_sign(self.theta_list, lam)
            if z is not None:
                zl = self.z_power(z, lam)
                acc += complex(self.signed(lam)) * zl
                row["abs_z_lambda"] = abs(zl)
                row["running_sum"] = [acc.real, acc.imag]
            rows.append(row)
        return {
            "xi_ref": [str(x) for x in self.xi_ref],
            "degree_bound": str(self.D),
            "sign_twist": self.sign_twist,
            "entries": rows,
        }

    def to_text(self, z=None) -> str:
        lines = [f"{'lambda':<16}{'coefficient':>20}{'|z^lambda|':>16}{'running sum':>34}"]
        acc = 0j
        for lam in self.order:
            coef = self.signed(lam)
            zs, rs = "", ""
            if z is not None:
                zl = self.z_power(z, lam)
                acc += complex(coef) * zl
                zs = f"{abs(zl):.6e}"
                rs = f"{acc.real:.12g}{acc.imag:+.3g}j"
            lines.append(f"{str(list(lam)):<16}{str(coef):>20}{zs:>16}{rs:>34}")
        return "\n".join(lines)


def _fill(table: SeriesCoefficientTable, D: Fraction, threads: int, seed: int) -> SeriesCoefficientTable:
    lams = polar_cone_lattice_points(table.chamber, table.xi_ref, D)
    missing = [lam for lam in lams if lam not in table.entries]
    if table.xi is None:
        table.xi = tuple(find_regular_xi(table.A, table.chamber, seed))

    def work(lam):
        return lam, mp_coefficient(table.A, table.chamber, table.theta_list, table.P, lam, xi=table.xi)

    if threads > 1 and len(missing) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, missing))
    else:
        results = [work(lam) for lam in missing]
    # single writer merge
    for lam, v in results:
        table.entries[lam] = v
    table.order = lams
    table.D = D
    return table


def coefficient_table(
    seq_under,
    c: Chamber,
    theta_list: Sequence[Sequence[int]],
    P: Poly,
    D,
    xi_ref: Optional[Sequence] = None,
    sign_twist: bool = True,
    threads: int = 1,
    seed: int = 0,
) -> SeriesCoefficientTable:
    A = _config(seq_under)
    if xi_ref is None:
        xi_ref = default_xi_ref(c)
    table = SeriesCoefficientTable(
        entries={},
        order=[],
        chamber=c,
        theta_list=tuple(tuple(int(x) for x in th) for th in theta_list),
        P=_pad(P, len(A)),
        A=A,
        xi_ref=tuple(Fraction(x) for x in xi_ref),
        D=Fraction(D),
        sign_twist=sign_twist,
    )
    return _fill(table, Fraction(D), threads, seed)


def series_truncation(
    seq_under,
    c: Chamber,
    theta_list: Sequence[Sequence[int]],
    P: Poly,
    z,
    xi_ref: Optional[Sequence] = None,
    D=20,
    sign_twist: bool = True,
    threads: int = 1,
    seed: int = 0,
) -> tuple[SeriesCoefficientTable, complex]:
    """Coefficient table on the slice and the partial sum at z.

    With sign_twist the term for lam carries (-1)^{<kappa, lam>}; this is the
    normalization under which the sum equals the toric residue computed by
    the local formula.
    """
    A = _config(seq_under)
    if len(z) != len(A):
        raise ValueError(f"z must have {len(A)} entries")
    if any(complex(x) == 0 for x in z):
        raise ValueError("z must have nonzero coordinates")
    table = coefficient_table(A, c, theta_list, P, D, xi_ref, sign_twist, threads, seed)
    return table, table.evaluate(z)
