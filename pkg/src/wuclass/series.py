"""Truncated power series over the rationals and the Wu characteristic series.

A :class:`TruncSeries` keeps the coefficients of ``x^0 .. x^N``; the order
``N`` is fixed at construction and operands of different order are
rejected instead of silently re-truncated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class OrderMismatchError(ValueError):
    pass


class NonInvertibleSeriesError(ValueError):
    pass


class BadConstantTermError(ValueError):
    pass


class TruncSeries:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            if len(cs) > order + 1:
                raise ValueError(f"{len(cs)} coefficients exceed order {order}")
            cs += [Fraction(0)] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self._coeffs = tuple(cs)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([1], order)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], order: int) -> "TruncSeries":
        cs = [0] * (order + 1)
        for e in exponents:
            if e <= order:
                cs[e] = 1
        return cls(cs)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self._coeffs[k]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"TruncSeries([{', '.join(str(c) for c in self._coeffs)}])"

    def _check(self, other: "TruncSeries") -> None:
        if not isinstance(other, TruncSeries):
            raise TypeError("expected a TruncSeries")
        if other.order != self.order:
            raise OrderMismatchError(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(a + b for a, b in zip(self._coeffs, other._coeffs))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(a - b for a, b in zip(self._coeffs, other._coeffs))

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(-a for a in self._coeffs)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            k = Fraction(other)
            return TruncSeries(k * a for a in self._coeffs)
        self._check(other)
        return TruncSeries(_convolve(self._coeffs, other._coeffs, self.order))

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        return series_div(self, other)

    def is_even(self) -> bool:
        return all(c == 0 for c in self._coeffs[1::2])

    def scaled(self, t) -> "TruncSeries":
        """Coefficients of ``s(t * x)``."""
        t = Fraction(t)
        return TruncSeries(c * t**k for k, c in enumerate(self._coeffs))

    def to_strings(self) -> list[str]:
        return [str(c) for c in self._coeffs]


def _convolve(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = []
    for n in range(order + 1):
        out.append(sum((a[k] * b[n - k] for k in range(n + 1) if a[k] and b[n - k]), Fraction(0)))
    return out


def series_add(s: TruncSeries, t: TruncSeries) -> TruncSeries:
    return s + t


def series_mul(s: TruncSeries, t: TruncSeries) -> TruncSeries:
    return s * t


def series_div(s: TruncSeries, t: TruncSeries) -> TruncSeries:
    """Quotient ``q`` with ``q * t == s`` through order N."""
    s._check(t)
    t0 = t[0]
    if t0 == 0:
        raise NonInvertibleSeriesError("divisor has zero constant term")
    q: list[Fraction] = []
    for n in range(s.order + 1):
        acc = s[n] - sum((q[k] * t[n - k] for k in range(n) if t[n - k]), Fraction(0))
        q.append(acc / t0)
    return TruncSeries(q)


def series_sqrt(s: TruncSeries) -> TruncSeries:
    """Square root with constant term 1.

    Solves ``2 r_n = s_n - sum_{k=1}^{n-1} r_k r_{n-k}`` term by term.
    """
    if s[0] != 1:
        raise BadConstantTermError(f"sqrt needs constant term 1, got {s[0]}")
    r = [Fraction(1)]
    for n in range(1, s.order + 1):
        acc = s[n] - sum((r[k] * r[n - k] for k in range(1, n)), Fraction(0))
        r.append(acc / 2)
    return TruncSeries(r)


def substitute_neg(s: TruncSeries) -> TruncSeries:
    """``s(-x)``."""
    return TruncSeries(-c if k % 2 else c for k, c in enumerate(s.coeffs))


def series_log(s: TruncSeries) -> TruncSeries:
    """``log s`` for constant term 1, via ``(log s)' = s'/s``."""
    if s[0] != 1:
        raise BadConstantTermError(f"log needs constant term 1, got {s[0]}")
    n = s.order
    deriv = TruncSeries([k * s[k] for k in range(1, n + 1)] + [0])
    q = series_div(deriv, s)
    return TruncSeries([0] + [q[k - 1] / k for k in range(1, n + 1)])


def _two_powers(limit: int):
    p = 1
    while p <= limit:
        yield p
        p *= 2


def wu_normal_series(order: int) -> TruncSeries:
    """``f(x) = 1 + x + x^3 + x^7 + ...`` (exponents ``2^n - 1``)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return TruncSeries.from_exponents((p - 1 for p in _two_powers(order + 1)), order)


def wu_tangential_series(order: int) -> TruncSeries:
    """``h(x) = 1 + x + x^2 + x^4 + x^8 + ...``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return TruncSeries.from_exponents([0, *_two_powers(order)], order)


def spin_normal_series(order: int) -> TruncSeries:
    """``g(x) = sqrt(f(x) f(-x))``."""
    if order < 2:
        raise ValueError("order must be >= 2")
    f = wu_normal_series(order)
    return series_sqrt(f * substitute_neg(f))


def spin_tangential_series(order: int) -> TruncSeries:
    """``G(x) = sqrt(h(x) h(-x))``."""
    if order < 2:
        raise ValueError("order must be >= 2")
    h = wu_tangential_series(order)
    return series_sqrt(h * substitute_neg(h))


def spinc_coefficient_series(order: int, verify: bool = True) -> tuple[TruncSeries, TruncSeries]:
    """``(A, B)`` with ``B = h(-x)/h(x)`` and ``A = sqrt(B)``.

    ``A_n`` is the coefficient of ``c^n`` in the degree-2n spin^c Wu class
    once all Pontryagin classes vanish.  With ``verify`` the square root is
    recomputed by the explicit recursion over the ``b_k`` and compared.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    h = wu_tangential_series(order)
    B = series_div(substitute_neg(h), h)
    A = series_sqrt(B)
    if verify:
        alt = a_coefficients_by_recursion(B.coeffs)
        if alt != list(A.coeffs):
            raise AssertionError("square-root routes disagree")
    return A, B


def a_coefficients_by_recursion(b: Sequence[Fraction]) -> list[Fraction]:
    """``a_0 = 1`` and ``2 a_n = b_n - sum_{k=1}^{n-1} a_k a_{n-k}``.

    Kept separate from :func:`series_sqrt`: it consumes a raw coefficient list
    and pairs symmetric terms, so it is an independent check of that routine.
    """
    if b[0] != 1:
        raise BadConstantTermError("b_0 must be 1")
    a = [Fraction(1)]
    for n in range(1, len(b)):
        half, odd = divmod(n, 2)
        top = half + 1 if odd else half
        cross = 2 * sum((a[k] * a[n - k] for k in range(1, top)), Fraction(0))
        if not odd:
            cross += a[half] ** 2
        a.append((Fraction(b[n]) - cross) / 2)
    return a


NAMED_SERIES = {
    "f": wu_normal_series,
    "h": wu_tangential_series,
    "g": spin_normal_series,
    "G": spin_tangential_series,
    "A": lambda n: spinc_coefficient_series(n)[0],
    "B": lambda n: spinc_coefficient_series(n)[1],
}
