"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class Poly:
    """Polynomial stored as {exponent tuple: nonzero Fraction}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(e) != nvars:
                        raise ValueError("exponent length mismatch")
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, nvars: int, c=1) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def variable(cls, nvars: int, k: int) -> "Poly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[k] = 1
                terms[tuple(e)] = c
        return cls(n, terms)

    def copy(self) -> "Poly":
        p = Poly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{k + 1}" + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        p = Poly(self.nvars)
        if c:
            p.terms = {e: v * c for e, v in self.terms.items()}
        return p

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        p = Poly(self.nvars)
        p.terms = {e: c for e, c in out.items() if c}
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        parts: dict[int, Poly] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), Poly(self.nvars)).terms[e] = c
        return parts

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, p in zip(point, e):
                if p:
                    term = term * x**p
            total = total + term
        return total

    def split_variable(self, k: int) -> dict[int, "Poly"]:
        """Write self = sum_p Q_p * x_k^p with Q_p free of x_k."""
        out: dict[int, Poly] = {}
        for e, c in self.terms.items():
            p = e[k]
            e2 = e[:k] + (0,) + e[k + 1:]
            out.setdefault(p, Poly(self.nvars)).terms[e2] = c
        return out

    def substitute_linear(self, forms: Sequence["Poly"]) -> "Poly":
        """Replace x_k by forms[k] (all forms share one variable count)."""
        nv = forms[0].nvars if forms else 0
        cache: dict[tuple[int, int], Poly] = {}

        def power(k, p):
            key = (k, p)
            if key not in cache:
                cache[key] = Poly.constant(nv, 1) if p == 0 else power(k, p - 1) * forms[k]
            return cache[key]

        result = Poly(nv)
        for e, c in self.terms.items():
            term = Poly.constant(nv, c)
            for k, p in enumerate(e):
                if p:
                    term = term * power(k, p)
            result = result + term
        return result

    def derivative(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
                out[e2] = c * e[k]
        return Poly(self.nvars, out)

    def to_json(self) -> dict[str, str]:
        return {",".join(str(x) for x in e): str(c) for e, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str], nvars: int | None = None) -> "Poly":
        terms = {}
        for key, val in data.items():
            e = tuple(int(x) for x in str(key).split(",")) if str(key).strip() else ()
            terms[e] = terms.get(e, 0) + Fraction(val)
        if nvars is None:
            nvars = len(next(iter(terms))) if terms else 0
        return cls(nvars, terms)


def product_of_powers(forms: Iterable[tuple["Poly", int]], nvars: int) -> Poly:
    out = Poly.constant(nvars, 1)
    for f, p in forms:
        if p:
            out = out * f**p
    return out


def generalized_binomial(e: int, k: int) -> Fraction:
    """binom(e, k) = e (e-1) ... (e-k+1) / k! for any integer e."""
    num = Fraction(1)
    for i in range(k):
        num = num * (e - i) / (i + 1)
    return num
