"""Multiplicative sequences and the universal integral Wu classes.

Classes live in the rational polynomial ring on ``c`` (degree 2) and the
Pontryagin classes ``p1, p2, ...`` (``p_i`` of degree ``4i``).  A monomial
is keyed by ``(c_exponent, (e1, e2, ...))`` with trailing zero exponents
stripped, so the same monomial compares equal whatever the ambient number
of Pontryagin variables.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterator, Mapping

from .series import (
    BadConstantTermError,
    TruncSeries,
    series_div,
    series_log,
    spin_normal_series,
    spin_tangential_series,
    spinc_coefficient_series,
    wu_tangential_series,
)


class DegreeMismatchError(ValueError):
    pass


class NonEvenSeriesError(ValueError):
    pass


Monomial = tuple  # (c_exp, p_exps)


def _strip(exps) -> tuple:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _add_exps(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    return _strip(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def monomial_degree(mono: Monomial) -> int:
    c, ps = mono
    return 2 * c + sum(4 * (i + 1) * e for i, e in enumerate(ps))


_FACTOR = re.compile(r"^(c|p(\d+))(?:\^(\d+))?$")


def parse_monomial(text: str) -> Monomial:
    """Parse ``"c^2 p1"``, ``"p1^2"``, ``"1"`` into a monomial key."""
    text = text.strip()
    if text in ("", "1"):
        return (0, ())
    c = 0
    ps: dict[int, int] = {}
    for tok in text.split():
        m = _FACTOR.match(tok)
        if not m:
            raise ValueError(f"bad monomial factor {tok!r} in {text!r}")
        e = int(m.group(3)) if m.group(3) else 1
        if m.group(1) == "c":
            c += e
        else:
            i = int(m.group(2))
            if i < 1:
                raise ValueError(f"Pontryagin index must be >= 1 in {text!r}")
            ps[i] = ps.get(i, 0) + e
    width = max(ps, default=0)
    return (c, _strip(ps.get(i, 0) for i in range(1, width + 1)))


def format_monomial(mono: Monomial) -> str:
    c, ps = mono
    parts = []
    if c:
        parts.append("c" if c == 1 else f"c^{c}")
    for i, e in enumerate(ps, start=1):
        if e:
            parts.append(f"p{i}" if e == 1 else f"p{i}^{e}")
    return " ".join(parts) or "1"


def _sort_key(mono: Monomial):
    c, ps = mono
    # descending c-exponent, then descending lexicographic p-exponents
    return (-c, tuple(-e for e in ps))


def _as_monomial(m) -> Monomial:
    if isinstance(m, str):
        return parse_monomial(m)
    c, ps = m
    return (int(c), _strip(ps))


class GradedPoly:
    """Homogeneous rational polynomial in ``c`` and ``p1, p2, ...``."""

    __slots__ = ("_terms", "degree")

    def __init__(self, terms: Mapping, degree: int | None = None):
        clean = {}
        for mono, coeff in terms.items():
            mono = _as_monomial(mono)
            coeff = Fraction(coeff)
            if coeff:
                clean[mono] = clean.get(mono, Fraction(0)) + coeff
        clean = {m: v for m, v in clean.items() if v}
        degrees = {monomial_degree(m) for m in clean}
        if degree is None:
            if len(degrees) != 1:
                raise DegreeMismatchError("degree is ambiguous; pass it explicitly")
            degree = degrees.pop()
        elif degrees - {degree}:
            raise DegreeMismatchError(f"monomials of degree {sorted(degrees)} in a degree-{degree} class")
        self._terms = MappingProxyType(clean)
        self.degree = degree

    @classmethod
    def constant(cls, value=1) -> "GradedPoly":
        return cls({(0, ()): value}, 0)

    @classmethod
    def c_power(cls, n: int, coeff=1) -> "GradedPoly":
        return cls({(n, ()): coeff}, 2 * n)

    @property
    def terms(self) -> Mapping:
        return self._terms

    def monomials(self) -> list:
        return sorted(self._terms, key=_sort_key)

    def __iter__(self) -> Iterator:
        for m in self.monomials():
            yield m, self._terms[m]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return self.degree == other.degree and dict(self._terms) == dict(other._terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self._terms.items())))

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        if other.degree != self.degree:
            raise DegreeMismatchError(f"cannot add degree {self.degree} and {other.degree}")
        acc = dict(self._terms)
        for m, v in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) + v
        return GradedPoly(acc, self.degree)

    def __mul__(self, other) -> "GradedPoly":
        if not isinstance(other, GradedPoly):
            k = Fraction(other)
            return GradedPoly({m: k * v for m, v in self._terms.items()}, self.degree)
        acc: dict = {}
        for (c1, p1), v1 in self._terms.items():
            for (c2, p2), v2 in other._terms.items():
                m = (c1 + c2, _add_exps(p1, p2))
                acc[m] = acc.get(m, Fraction(0)) + v1 * v2
        return GradedPoly(acc, self.degree + other.degree)

    __rmul__ = __mul__

    def coefficient(self, monomial) -> Fraction:
        return coefficient_of(self, monomial)

    def at_c_zero(self) -> "GradedPoly":
        return GradedPoly({m: v for m, v in self._terms.items() if m[0] == 0}, self.degree)

    def at_p_zero(self) -> Fraction:
        """Coefficient of the pure ``c`` power (all Pontryagin classes set to 0)."""
        if self.degree % 2:
            return Fraction(0)
        return self._terms.get((self.degree // 2, ()), Fraction(0))

    def evaluate(self, values: Mapping) -> Fraction:
        """Linear pairing: sum of ``coeff * values[monomial]``.

        Missing monomials raise ``KeyError`` naming the monomial.
        """
        total = Fraction(0)
        for m, v in self._terms.items():
            if m not in values:
                raise KeyError(format_monomial(m))
            total += v * values[m]
        return total

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (m, v) in enumerate(self):
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            name = format_monomial(m)
            if name == "1":
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag} {name}"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [{"monomial": format_monomial(m), "coeff": str(v)} for m, v in self],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedPoly":
        return cls({parse_monomial(t["monomial"]): Fraction(t["coeff"]) for t in data["terms"]},
                   data["degree"])

    def __repr__(self) -> str:
        return f"GradedPoly({self.to_text()!r}, degree={self.degree})"


def coefficient_of(poly: GradedPoly, monomial) -> Fraction:
    mono = _as_monomial(monomial)
    if monomial_degree(mono) != poly.degree:
        raise DegreeMismatchError(
            f"{format_monomial(mono)} has degree {monomial_degree(mono)}, class has degree {poly.degree}"
        )
    return poly.terms.get(mono, Fraction(0))


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.parts)) + "}"


def partitions(m: int, largest: int | None = None) -> Iterator[Partition]:
    """All partitions of ``m`` with parts in non-increasing order."""
    for parts in _partition_tuples(m, m if largest is None else largest):
        yield Partition(parts)


def _partition_tuples(m: int, largest: int):
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _partition_tuples(m - first, first):
            yield (first, *rest)


# --- symmetric functions -------------------------------------------------
# Polynomials in elementary symmetric functions e1, e2, ... are plain dicts
# keyed by stripped exponent tuples.

def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            m = _add_exps(ma, mb)
            out[m] = out.get(m, Fraction(0)) + va * vb
    return {m: v for m, v in out.items() if v}


def _padd(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for m, v in b.items():
        out[m] = out.get(m, Fraction(0)) + scale * v
    return {m: v for m, v in out.items() if v}


def _e(j: int) -> dict:
    return {_strip([0] * (j - 1) + [1]): Fraction(1)}


def _power_sums(top: int) -> list[dict]:
    """Newton: ``s_k = sum_{i<k} (-1)^(i-1) e_i s_{k-i} + (-1)^(k-1) k e_k``."""
    s: list[dict] = [{}]
    for k in range(1, top + 1):
        acc: dict = {}
        for i in range(1, k):
            acc = _padd(acc, _pmul(_e(i), s[k - i]), (-1) ** (i - 1))
        acc = _padd(acc, _e(k), (-1) ** (k - 1) * k)
        s.append(acc)
    return s


def _elementary_components(Q: TruncSeries, top: int) -> list[dict]:
    """Weight-k pieces of prod_i Q(t_i) as polynomials in e_j(t).

    Route: log Q -> sum of l_k * (power sum s_k) -> exponentiate by
    ``k E_k = sum_j j L_j E_{k-j}``.
    """
    if Q[0] != 1:
        raise BadConstantTermError(f"characteristic series needs constant term 1, got {Q[0]}")
    if Q.order < top:
        raise ValueError(f"series of order {Q.order} is too short for weight {top}")
    log_q = series_log(TruncSeries(Q.coeffs[: top + 1]))
    s = _power_sums(top)
    L = [{}] + [{m: log_q[k] * v for m, v in s[k].items() if log_q[k]} for k in range(1, top + 1)]
    E: list[dict] = [{(): Fraction(1)}]
    for k in range(1, top + 1):
        acc: dict = {}
        for j in range(1, k + 1):
            if L[j] and E[k - j]:
                acc = _padd(acc, _pmul(L[j], E[k - j]), j)
        E.append({m: v / k for m, v in acc.items()})
    return E


def _truncate_roots(poly: dict, n_roots: int | None) -> dict:
    if n_roots is None:
        return poly
    return {m: v for m, v in poly.items() if len(m) <= n_roots}


def multiplicative_class_pontryagin(Q: TruncSeries, top_degree: int,
                                    n_roots: int | None = None) -> dict[int, GradedPoly]:
    """Components ``K_k(p1..pk)`` (degree 4k) of ``prod_i Q(x_i)``.

    ``Q`` must be even with constant term 1; ``p_j`` is the j-th elementary
    symmetric function of the ``x_i^2``.  ``n_roots`` restricts to that many
    formal roots (``p_j = 0`` for ``j > n_roots``).
    """
    if top_degree % 4:
        raise ValueError("top_degree must be a multiple of 4")
    if not Q.is_even():
        raise NonEvenSeriesError("Pontryagin genus needs an even series")
    K = top_degree // 4
    if Q.order < 2 * K:
        raise ValueError(f"series of order {Q.order} too short for degree {top_degree}")
    P = TruncSeries(Q.coeffs[0: 2 * K + 1: 2])
    E = _elementary_components(P, K)
    return {
        k: GradedPoly({(0, m): v for m, v in _truncate_roots(E[k], n_roots).items()}, 4 * k)
        for k in range(K + 1)
    }


@dataclass(frozen=True)
class ChernPoly:
    """Homogeneous polynomial in Chern classes ``c1, c2, ...`` (``c_j`` of degree 2j)."""

    terms: Mapping
    degree: int

    def __post_init__(self):
        clean = {_strip(m): Fraction(v) for m, v in self.terms.items() if v}
        for m in clean:
            if 2 * sum((i + 1) * e for i, e in enumerate(m)) != self.degree:
                raise DegreeMismatchError(f"monomial {m} not of degree {self.degree}")
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(_strip(exps), Fraction(0))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, key=lambda m: tuple(-e for e in m)):
            v = self.terms[m]
            name = " ".join(f"c{i}" if e == 1 else f"c{i}^{e}"
                            for i, e in enumerate(m, start=1) if e) or "1"
            mag = abs(v)
            body = name if (mag == 1 and name != "1") else (str(mag) if name == "1" else f"{mag} {name}")
            if not out:
                out.append(body if v > 0 else f"-{body}")
            else:
                out.append(f"{'-' if v < 0 else '+'} {body}")
        return " ".join(out)

    def to_json(self) -> dict:
        terms = []
        for m in sorted(self.terms, key=lambda m: tuple(-e for e in m)):
            name = " ".join(f"c{i}" if e == 1 else f"c{i}^{e}"
                            for i, e in enumerate(m, start=1) if e) or "1"
            terms.append({"monomial": name, "coeff": str(self.terms[m])})
        return {"degree": self.degree, "terms": terms}


def multiplicative_class_chern(Q: TruncSeries, top_degree: int) -> dict[int, ChernPoly]:
    """Components (degree 2k) of ``prod_i Q(x_i)`` over Chern roots ``x_i``."""
    if top_degree % 2:
        raise ValueError("top_degree must be even")
    K = top_degree // 2
    E = _elementary_components(Q, K)
    return {k: ChernPoly(E[k], 2 * k) for k in range(K + 1)}


def complex_wu_classes(top_degree: int) -> dict[int, ChernPoly]:
    """Complex tangential Wu class: the Chern genus of ``h``."""
    return multiplicative_class_chern(wu_tangential_series(max(top_degree // 2, 1)), top_degree)


_lock = threading.RLock()


@lru_cache(maxsize=None)
def _spin_classes_cached(top_degree: int, variant: str) -> tuple:
    order = max(2, top_degree // 2)
    if variant == "tangential":
        Q = spin_tangential_series(order)
    elif variant == "normal":
        Q = spin_normal_series(order)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    classes = multiplicative_class_pontryagin(Q, top_degree)
    return tuple(classes[k] for k in sorted(classes))


def spin_wu_classes(top_degree: int, variant: str = "tangential") -> dict[int, GradedPoly]:
    """Integral spin Wu classes ``k -> degree-4k class`` (series ``G`` or ``g``)."""
    if top_degree % 4:
        raise ValueError("top_degree must be a multiple of 4")
    with _lock:
        classes = _spin_classes_cached(top_degree, variant)
    return dict(enumerate(classes))


@lru_cache(maxsize=None)
def _spinc_closed_form(top_degree: int) -> tuple:
    N = top_degree // 2
    spin = spin_wu_classes(4 * (N // 2), "tangential")
    A, _ = spinc_coefficient_series(max(N, 1))
    out = []
    for n in range(N + 1):
        acc = GradedPoly({}, 2 * n)
        for k in range(n // 2 + 1):
            a = A[n - 2 * k]
            if a:
                acc = acc + spin[k] * GradedPoly.c_power(n - 2 * k, a)
        out.append(acc)
    return tuple(out)


def spinc_wu_classes(top_degree: int) -> dict[int, GradedPoly]:
    """Integral spin^c Wu classes ``n -> degree-2n class`` for ``2n <= top_degree``.

    Closed form: the ``G``-genus of the Pontryagin roots times
    ``A(c) = sqrt(h(-c)/h(c))``.
    """
    if top_degree < 0:
        raise ValueError("top_degree must be nonnegative")
    with _lock:
        classes = _spinc_closed_form(top_degree)
    return dict(enumerate(classes))


def spinc_wu_classes_by_definition(top_degree: int) -> dict[int, GradedPoly]:
    """Same classes from ``mu_Spin(V + xi) / h(c)`` directly.

    ``xi`` contributes the extra Pontryagin root ``c``, so ``p_j`` of the sum
    is ``p_j + c^2 p_{j-1}``; the spin class is evaluated there and the
    result multiplied by the series ``1/h(c)``.
    """
    N = top_degree // 2
    K = N // 2
    spin = spin_wu_classes(4 * K, "tangential")
    order = max(N, 1)
    h = wu_tangential_series(order)
    inv_h = series_div(TruncSeries.one(order), h)

    def shifted_p(j: int) -> GradedPoly:
        pj = GradedPoly({(0, _strip([0] * (j - 1) + [1])): 1}, 4 * j)
        prev = GradedPoly.constant() if j == 1 else GradedPoly({(0, _strip([0] * (j - 2) + [1])): 1}, 4 * (j - 1))
        return pj + prev * GradedPoly.c_power(2)

    powers: dict = {}

    def shifted_power(j: int, e: int) -> GradedPoly:
        if (j, e) not in powers:
            powers[(j, e)] = GradedPoly.constant() if e == 0 else shifted_power(j, e - 1) * shifted_p(j)
        return powers[(j, e)]

    total_spin = []
    for k in range(K + 1):
        acc = GradedPoly({}, 4 * k)
        for (c, ps), v in spin[k].terms.items():
            term = GradedPoly.constant(v)
            for j, e in enumerate(ps, start=1):
                if e:
                    term = term * shifted_power(j, e)
            acc = acc + term
        total_spin.append(acc)

    out = {}
    for n in range(N + 1):
        acc = GradedPoly({}, 2 * n)
        for k in range(n // 2 + 1):
            d = inv_h[n - 2 * k]
            if d:
                acc = acc + total_spin[k] * GradedPoly.c_power(n - 2 * k, d)
        out[n] = acc
    return out


def wu_monomial(I: Partition, top_degree: int | None = None) -> GradedPoly:
    """Product ``mu_{2 j_1} ... mu_{2 j_r}`` of spin^c Wu classes."""
    if not isinstance(I, Partition):
        I = Partition(tuple(I))
    need = 2 * I.weight
    if top_degree is None:
        top_degree = need
    if need > top_degree:
        raise DegreeMismatchError(f"partition {I} needs degree {need} > {top_degree}")
    return _wu_monomial_cached(I.parts, top_degree)


@lru_cache(maxsize=4096)
def _wu_monomial_cached(parts: tuple, top_degree: int) -> GradedPoly:
    classes = spinc_wu_classes(top_degree)
    out = GradedPoly.constant()
    for j in parts:
        out = out * classes[j]
    return out
