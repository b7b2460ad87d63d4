"""Iterated residues along flags and the Jeffrey-Kirwan residue.

A section phi = prefactor * N(u) / prod_i l_i(u)^{e_i} has a polynomial
numerator in the lattice coordinates of a and a denominator that stays
factored over linear forms l_i (by default the alpha_i).  Residues are
computed stage by stage in coordinates adapted to a flag: at stage j the
factors that only involve u_1..u_j are pure poles in u_j, every other
factor is expanded as a binomial series in u_j, and the u_j^{-1}
coefficient is kept.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chambers import (
    PLUS,
    Chamber,
    Flag,
    as_tuple_config,
    flags_for_xi,
    regularity,
)
from .errors import NonAdmissibleDenominator, RegularXiNotFound
from .linalg import dot, inverse, vecmat
from .poly import Poly, generalized_binomial


@dataclass(frozen=True)
class RationalSection:
    """prefactor * numerator / prod forms[i]^exponents[i]."""

    numerator: Poly
    exponents: tuple[int, ...]
    forms: tuple[tuple[Fraction, ...], ...]
    prefactor: Fraction = Fraction(1)

    @property
    def rank(self) -> int:
        return self.numerator.nvars

    def degree(self) -> Optional[int]:
        """Homogeneous degree, or None if the numerator is not homogeneous."""
        if self.numerator.is_zero():
            return None
        if not self.numerator.is_homogeneous():
            return None
        return self.numerator.degree() - sum(self.exponents)

    def homogeneous_parts(self) -> dict[int, "RationalSection"]:
        out = {}
        for deg, part in self.numerator.homogeneous_parts().items():
            out[deg - sum(self.exponents)] = RationalSection(part, self.exponents, self.forms, self.prefactor)
        return out

    def scale(self, c) -> "RationalSection":
        return RationalSection(self.numerator, self.exponents, self.forms, self.prefactor * Fraction(c))

    def times_poly(self, p: Poly) -> "RationalSection":
        return RationalSection(self.numerator * p, self.exponents, self.forms, self.prefactor)

    def evaluate(self, u: Sequence):
        val = self.prefactor * self.numerator.evaluate(u)
        for f, e in zip(self.forms, self.exponents):
            if e:
                val = val / dot(f, u) ** e
        return val

    def to_json(self):
        return {
            "numerator": self.numerator.to_json(),
            "denominator": list(self.exponents),
            "forms": [[str(x) for x in f] for f in self.forms],
            "prefactor": str(self.prefactor),
        }


def section(A, numerator: Poly, exponents: Sequence[int], prefactor=1) -> RationalSection:
    """Section with denominator forms the alpha_i of A."""
    A = as_tuple_config(A)
    forms = tuple(tuple(Fraction(x) for x in a) for a in A)
    if len(exponents) != len(forms):
        raise ValueError("one exponent per element of A is required")
    if any(e < 0 for e in exponents):
        raise ValueError("denominator exponents must be nonnegative")
    return RationalSection(numerator, tuple(int(e) for e in exponents), forms, Fraction(prefactor))


def form_poly(form: Sequence) -> Poly:
    return Poly.linear([Fraction(x) for x in form])


def make_p_lambda(A, lam: Sequence[int]) -> RationalSection:
    """p_lambda(u) = prod alpha_i(u)^{<alpha_i, lambda>} split by sign of the pairing."""
    A = as_tuple_config(A)
    r = len(A[0])
    num = Poly.constant(r, 1)
    exps = []
    for a in A:
        k = dot(a, lam)
        if k > 0:
            num = num * form_poly(a) ** k
        exps.append(max(0, -k))
    return section(A, num, exps)


def polynomial_in_forms(P: Poly, forms: Sequence[Sequence]) -> Poly:
    """P(l_1(u), ..., l_m(u)) as a polynomial in the coordinates of u."""
    return P.substitute_linear([form_poly(f) for f in forms])


def iterated_residue(phi: RationalSection, F: Flag) -> Fraction:
    """Res_{u_r=0} ... Res_{u_1=0} of phi in coordinates adapted to F."""
    r = phi.rank
    Gamma = [[Fraction(x) for x in g] for g in F.adapted_basis]
    Ginv = inverse(Gamma)
    # lattice coordinate x_k = sum_j Ginv[k][j] y_j where y_j = <gamma_j, x>
    coords = [Poly.linear(Ginv[k]) for k in range(r)]
    numerator = phi.numerator.substitute_linear(coords) if phi.numerator.terms else Poly.zero(r)
    forms = [tuple(vecmat(list(f), Ginv)) for f in phi.forms]
    terms: dict[tuple[int, ...], Poly] = {tuple(phi.exponents): numerator}
    for j in range(r):
        terms = _residue_stage(terms, forms, j, r)
        if not terms:
            return Fraction(0)
    total = Fraction(0)
    for exps, p in terms.items():
        if any(exps):
            raise NonAdmissibleDenominator("factors remain after all residue stages")
        total += p.terms.get((0,) * r, Fraction(0))
    return total * phi.prefactor


def _residue_stage(terms, forms, j: int, r: int):
    out: dict[tuple[int, ...], Poly] = {}
    for exps, num in terms.items():
        if num.is_zero():
            continue
        pure = []
        mixed = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            c = forms[i]
            tail = c[j + 1:]
            if all(x == 0 for x in tail):
                if c[j] == 0:
                    raise NonAdmissibleDenominator(f"form {i} vanishes identically at stage {j + 1}")
                pure.append(i)
            elif c[j] != 0:
                mixed.append(i)
        order = sum(exps[i] for i in pure)
        if order == 0:
            continue
        const = Fraction(1)
        for i in pure:
            const /= forms[i][j] ** exps[i]
        target = order - 1
        pieces = num.split_variable(j)
        base = list(exps)
        for i in pure:
            base[i] = 0
        # distribute the u_j power 'target' among numerator and mixed factors
        partial = [(target, tuple(base), const)]
        for i in mixed:
            nxt = []
            a = forms[i][j]
            e = exps[i]
            for budget, ex, coef in partial:
                for k in range(budget + 1):
                    ex2 = list(ex)
                    ex2[i] = e + k
                    nxt.append((budget - k, tuple(ex2), coef * generalized_binomial(-e, k) * a**k))
            partial = nxt
        for budget, ex, coef in partial:
            piece = pieces.get(budget)
            if piece is None or coef == 0:
                continue
            acc = out.get(ex)
            add = piece.scale(coef)
            out[ex] = add if acc is None else acc + add
    return {k: v for k, v in out.items() if not v.is_zero()}


# ---------------------------------------------------------- JK residue


def _seeded_offsets(r: int, seed: int):
    rng = random.Random(seed)
    while True:
        yield [Fraction(rng.randint(-1000, 1000), 1000 * rng.randint(1, 50)) for _ in range(r)]


def find_regular_xi(A, c: Chamber, seed: int = 0, max_tries: int = 1000, orientation: int = 1):
    """A rational xi in c that is FL+-regular, searched from the interior point."""
    A = as_tuple_config(A)
    x0 = list(c.interior_point)
    best = None
    candidates = [x0]
    offsets = _seeded_offsets(len(x0), seed)
    for attempt in range(max_tries):
        if attempt < len(candidates):
            xi = candidates[attempt]
        else:
            off = next(offsets)
            scale = Fraction(1, 1 + attempt // 50)
            xi = [a + scale * b for a, b in zip(x0, off)]
        if not c.contains(xi):
            continue
        verdict = regularity(A, xi, 0, PLUS, orientation)
        if verdict.regular:
            return xi
        if best is None or verdict.tau_margin > best:
            best = verdict.tau_margin
    raise RegularXiNotFound(f"no FL+-regular vector found in {max_tries} tries; best margin {best}")


def jk_residue(
    phi: RationalSection,
    c: Chamber,
    A=None,
    xi: Optional[Sequence] = None,
    basis_seed: Optional[int] = None,
    seed: int = 0,
    orientation: int = 1,
) -> Fraction:
    """JK_c(phi) as the nu-signed sum of iterated residues over FL+(A, xi).

    A defaults to the forms of phi.  Only the homogeneous part of degree -r
    contributes.  ``xi`` overrides the seeded search (it must be a regular
    point of c); ``basis_seed`` replaces every adapted basis by a random
    admissible variant, for invariance testing.
    """
    from .chambers import basis_variant

    if A is None:
        A = phi.forms
    A = as_tuple_config(A)
    r = phi.rank
    parts = phi.homogeneous_parts()
    target = parts.get(-r)
    if target is None:
        return Fraction(0)
    if xi is None:
        xi = find_regular_xi(A, c, seed, orientation=orientation)
    else:
        xi = [Fraction(x) for x in xi]
        if not c.contains(xi) or not regularity(A, xi, 0, PLUS, orientation).regular:
            raise RegularXiNotFound(f"supplied xi {xi} is not a regular point of the chamber")
    total = Fraction(0)
    for fc in flags_for_xi(A, xi, PLUS, orientation):
        F = fc.flag
        if basis_seed is not None:
            F = basis_variant(F, basis_seed)
        total += F.nu * iterated_residue(target, F)
    return total

