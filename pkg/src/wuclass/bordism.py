"""Bordism decisions from characteristic-number records of spin^c manifolds.

A record holds the numbers ``<c^a p_I, [M]>`` as integers.  Everything
here works at the level of those numbers; nothing is computed from an
actual manifold.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .char_class import (
    format_monomial,
    monomial_degree,
    parse_monomial,
    partitions,
    wu_monomial,
)
from .exact_arith import nu2


class RecordError(ValueError):
    """Malformed manifold record; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class MissingMonomialError(KeyError):
    pass


class PreconditionError(ValueError):
    pass


_SW_FACTOR = re.compile(r"^w(\d+)(?:\^(\d+))?$")


def _sw_degree(key: str) -> int:
    deg = 0
    for tok in key.split():
        m = _SW_FACTOR.match(tok)
        if not m or int(m.group(1)) < 1:
            raise RecordError(f"bad Stiefel-Whitney factor {tok!r}", f"sw_numbers[{key!r}]")
        deg += int(m.group(1)) * (int(m.group(2)) if m.group(2) else 1)
    return deg


@dataclass(frozen=True)
class ManifoldRecord:
    dim: int
    char_numbers: Mapping = field(default_factory=dict)
    sw_numbers: Mapping | None = None
    almost_flat: bool = False
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise RecordError("dim must be a positive integer", "dim")
        nums = {}
        for key, value in dict(self.char_numbers).items():
            where = f"char_numbers[{key!r}]"
            try:
                mono = parse_monomial(key) if isinstance(key, str) else (int(key[0]), tuple(key[1]))
            except (ValueError, TypeError, IndexError) as exc:
                raise RecordError(str(exc), where) from None
            if monomial_degree(mono) != self.dim:
                raise RecordError(
                    f"monomial has degree {monomial_degree(mono)}, record has dim {self.dim}", where)
            if isinstance(value, bool) or not isinstance(value, int):
                if isinstance(value, Fraction) and value.denominator == 1:
                    value = int(value)
                else:
                    raise RecordError(f"characteristic numbers must be integers, got {value!r}", where)
            if mono in nums:
                raise RecordError("monomial listed twice", where)
            nums[mono] = value
        object.__setattr__(self, "char_numbers", nums)
        if self.sw_numbers is not None:
            sw = {}
            for key, bit in dict(self.sw_numbers).items():
                where = f"sw_numbers[{key!r}]"
                if isinstance(bit, bool) or bit not in (0, 1):
                    raise RecordError(f"Stiefel-Whitney numbers are bits, got {bit!r}", where)
                if _sw_degree(key) != self.dim:
                    raise RecordError(f"degree {_sw_degree(key)} differs from dim {self.dim}", where)
                sw[" ".join(key.split())] = int(bit)
            object.__setattr__(self, "sw_numbers", sw)

    @classmethod
    def from_json(cls, data: Any) -> "ManifoldRecord":
        if not isinstance(data, dict):
            raise RecordError("record must be a JSON object")
        unknown = set(data) - {"dim", "almost_flat", "char_numbers", "sw_numbers", "label"}
        if unknown:
            raise RecordError(f"unknown fields {sorted(unknown)}")
        if "dim" not in data:
            raise RecordError("missing field", "dim")
        chars = data.get("char_numbers", {})
        if not isinstance(chars, dict):
            raise RecordError("must be an object", "char_numbers")
        sw = data.get("sw_numbers")
        if sw is not None and not isinstance(sw, dict):
            raise RecordError("must be an object", "sw_numbers")
        flat = data.get("almost_flat", False)
        if not isinstance(flat, bool):
            raise RecordError("must be true or false", "almost_flat")
        return cls(data["dim"], chars, sw, flat, str(data.get("label", "")))

    def to_json(self) -> dict:
        out: dict = {"dim": self.dim, "almost_flat": self.almost_flat}
        if self.label:
            out["label"] = self.label
        out["char_numbers"] = {format_monomial(m): v for m, v in sorted(self.char_numbers.items())}
        if self.sw_numbers is not None:
            out["sw_numbers"] = dict(sorted(self.sw_numbers.items()))
        return out

    @property
    def half_dim(self) -> int:
        return self.dim // 2

    def number(self, mono) -> int:
        """``<mono, [M]>``; p-involving monomials default to 0 on almost-flat records."""
        if isinstance(mono, str):
            mono = parse_monomial(mono)
        if mono in self.char_numbers:
            return self.char_numbers[mono]
        if self.almost_flat and mono[1]:
            return 0
        raise MissingMonomialError(format_monomial(mono))

    def scaled(self, t: int) -> "ManifoldRecord":
        return ManifoldRecord(self.dim, {m: t * v for m, v in self.char_numbers.items()},
                              self.sw_numbers, self.almost_flat, self.label)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, (Fraction, int)) and not isinstance(w, bool):
            w = str(w)
        return {"name": self.name, "passed": self.passed, "witness": w, "detail": self.detail}


@dataclass
class VerdictReport:
    checks: list
    conclusion: str
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "conclusion": self.conclusion,
            "checks": [c.to_json() for c in self.checks],
            "details": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.details.items()},
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"conclusion: {self.conclusion}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = f" = {c.witness}" if c.witness is not None else ""
            lines.append(f"  [{mark}] {c.name}{extra}" + (f"  ({c.detail})" if c.detail else ""))
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def index_denominator(n: int) -> int:
    """``2^n n!``, which must divide ``<c^n, [M]>`` on an almost flat 2n-manifold."""
    return 2 ** n * math.factorial(n)


def check_almost_flat_consistency(r: ManifoldRecord) -> VerdictReport:
    """Vanishing Pontryagin numbers and index divisibility of ``<c^n, [M]>``."""
    checks = []
    for mono, value in sorted(r.char_numbers.items()):
        if mono[1]:
            checks.append(Check(f"<{format_monomial(mono)}> = 0", value == 0, value,
                                "" if value == 0 else "Pontryagin number of an almost flat manifold"))
    if r.dim % 2 == 0:
        n = r.half_dim
        mono = (n, ())
        name = f"2^{n}*{n}! divides <{format_monomial(mono)}>"
        try:
            value = r.number(mono)
        except MissingMonomialError:
            checks.append(Check(name, False, None, "missing"))
        else:
            den = index_denominator(n)
            checks.append(Check(name, value % den == 0, value,
                                f"{value} / {den} = {Fraction(value, den)}"))
    ok = all(c.passed for c in checks)
    notes = [] if r.dim % 2 == 0 else ["odd dimension: no c-Pontryagin numbers exist"]
    return VerdictReport(checks, "consistent" if ok else "inconsistent", notes)


@dataclass(frozen=True)
class IndexResult:
    value: Fraction
    integral: bool


def spinc_index(r: ManifoldRecord) -> IndexResult:
    """Index of the spin^c Dirac operator, ``<c^n, [M]> / (2^n n!)``.

    Only valid when every Pontryagin number vanishes.
    """
    if r.dim % 2:
        raise PreconditionError("spin^c index formula needs even dimension")
    bad = [format_monomial(m) for m, v in r.char_numbers.items() if m[1] and v]
    if bad:
        raise PreconditionError(f"nonzero Pontryagin numbers: {', '.join(sorted(bad))}")
    n = r.half_dim
    value = Fraction(r.number((n, ())), index_denominator(n))
    return IndexResult(value, value.denominator == 1)


def integral_wu_numbers(r: ManifoldRecord) -> dict:
    """``I -> <mu_{2I}, [M]>`` for every partition ``I`` of ``dim/2`` (empty for odd dim)."""
    if r.dim % 2:
        return {}
    out = {}
    for I in partitions(r.half_dim):
        poly = wu_monomial(I, r.dim)
        total = Fraction(0)
        for mono, coeff in poly.terms.items():
            total += coeff * r.number(mono)
        out[I] = total
    return out


def wu_parity_check(r: ManifoldRecord) -> VerdictReport:
    """Every partition Wu number must be an integer divisible by ``2^m``."""
    m = r.half_dim
    checks = []
    for I, value in integral_wu_numbers(r).items():
        v2 = None if value == 0 else nu2(value)
        ok = value.denominator == 1 and (value == 0 or v2 >= m)
        detail = "nu2 = inf" if v2 is None else f"nu2 = {v2}"
        if value.denominator != 1:
            detail += ", not an integer"
        checks.append(Check(f"2^{m} divides Wu number {I}", ok, value, detail))
    ok = all(c.passed for c in checks)
    notes = ["odd dimension: all integral Wu numbers vanish"] if r.dim % 2 else []
    return VerdictReport(checks, "pass" if ok else "fail", notes)


def sw_vanishing_report(r: ManifoldRecord, parity: VerdictReport | None = None) -> VerdictReport:
    """Compare supplied Stiefel-Whitney bits with what the Wu parities imply."""
    if parity is None:
        parity = wu_parity_check(r)
    implied = parity.passed
    if r.sw_numbers is None:
        if implied:
            return VerdictReport([Check("Wu parities", True)], "sw-vanish-implied",
                                 ["SW numbers vanish (implied by the Wu parities)"])
        return VerdictReport([Check("Wu parities", False)], "no-implication",
                             ["Wu parities fail; nothing follows about SW numbers"])
    checks = [Check(f"<{k}> = 0", v == 0, v) for k, v in sorted(r.sw_numbers.items())]
    all_zero = all(c.passed for c in checks)
    if all_zero:
        return VerdictReport(checks, "sw-vanish")
    if implied:
        return VerdictReport(checks, "contradiction",
                             ["nonzero SW number although every Wu parity holds: "
                              "input inconsistent with an almost flat spin^c manifold"])
    return VerdictReport(checks, "sw-nonzero")


def bounding_verdict(r: ManifoldRecord) -> VerdictReport:
    """Decide orientable and spin^c bounding for an almost flat spin^c record.

    The spin^c statement concerns the given structure only.
    """
    consistency = check_almost_flat_consistency(r)
    checks = list(consistency.checks)
    details: dict = {}
    if not consistency.passed:
        return VerdictReport(checks, "hypotheses-not-met",
                             ["record is not realizable by an almost flat spin^c manifold"], details)
    notes = []
    if r.dim % 2:
        details.update(bounds_orientably=True, bounds_spinc=True)
        notes.append("odd dimension: <c^floor(n/2), [M]> vanishes automatically")
        sw = sw_vanishing_report(r)
        if sw.conclusion == "contradiction":
            return VerdictReport(checks + sw.checks, "hypotheses-not-met", sw.notes, {})
        return VerdictReport(checks, "bounds-spinc", notes, details)

    m = r.half_dim
    parity = wu_parity_check(r)
    sw = sw_vanishing_report(r, parity)
    checks.append(Check("Wu numbers divisible by 2^m", parity.passed))
    checks.append(Check("Stiefel-Whitney numbers vanish", sw.conclusion in ("sw-vanish", "sw-vanish-implied"),
                        None, sw.conclusion))
    if not (parity.passed and checks[-1].passed):
        return VerdictReport(checks, "hypotheses-not-met", sw.notes, details)
    witness = r.number((m, ()))
    details["witness"] = f"<{format_monomial((m, ()))}> = {witness}"
    details["index"] = Fraction(witness, index_denominator(m))
    details["witness_nu2"] = "inf" if witness == 0 else nu2(witness)
    details["bounds_orientably"] = True
    details["bounds_spinc"] = witness == 0
    if witness == 0:
        notes.append("all c-Pontryagin and SW numbers vanish")
        return VerdictReport(checks, "bounds-spinc", notes, details)
    notes.append("nonzero c-Pontryagin number: does not bound as spin^c with this structure")
    return VerdictReport(checks, "bounds-orientably-not-spinc", notes, details)
