"""Integral (co)homology of finite groups from the normalized bar resolution.

Groups are given by multiplication tables.  ``C_n`` has basis the bars
``[g1|...|gn]`` with every ``gi`` different from the identity; bars that
would acquire an identity entry are dropped from boundaries.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exact_arith import IntMatrix, smith_normal_form


class SizeBudgetError(ValueError):
    """Requested computation is larger than the configured budget."""


class GroupTableError(ValueError):
    """Table does not define a group."""


class CrossCheckError(AssertionError):
    """Two independent routes disagree; indicates a bug."""


MAX_GROUP_ORDER = 64
# largest group order allowed for H_n / H^n, per degree
DEFAULT_MAX_ORDER = {1: 64, 2: 16, 3: 16}
DIRECT_COCHAIN_MAX_ORDER = 8


def max_order_for(n: int) -> int:
    env = os.environ.get("WUCLASS_MAX_ORDER")
    if env:
        return int(env)
    return DEFAULT_MAX_ORDER[n]


class FiniteGroup:
    """Finite group as a multiplication table (0-based indices).

    ``table[a][b]`` is the index of ``a * b``.
    """

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0,
                 name: str = "", validate: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.identity = int(identity)
        self.name = name
        if validate:
            self._validate()
        self._inverse = None

    def _validate(self) -> None:
        m = self.order
        if m == 0:
            raise GroupTableError("empty table")
        if m > MAX_GROUP_ORDER:
            raise SizeBudgetError(f"group order {m} exceeds {MAX_GROUP_ORDER}")
        if any(len(r) != m for r in self.table):
            raise GroupTableError("table is not square")
        if not 0 <= self.identity < m:
            raise GroupTableError("identity index out of range")
        T = np.array(self.table, dtype=np.int64)
        if T.min() < 0 or T.max() >= m:
            raise GroupTableError("table entry out of range")
        e = self.identity
        ar = np.arange(m)
        if not (np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)):
            raise GroupTableError("identity is not neutral")
        srt = np.sort(T, axis=1)
        if not (srt == ar).all() or not (np.sort(T, axis=0) == ar[:, None]).all():
            raise GroupTableError("rows/columns are not permutations")
        # (ab)c == a(bc) for all triples
        lhs = T[T[:, :, None], ar[None, None, :]]
        rhs = T[ar[:, None, None], T[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupTableError("multiplication is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        if self._inverse is None:
            inv = [0] * self.order
            for x in range(self.order):
                for y in range(self.order):
                    if self.table[x][y] == self.identity:
                        inv[x] = y
                        break
            self._inverse = inv
        return self._inverse[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def closure(self, gens) -> frozenset:
        """Subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, elements) -> tuple["FiniteGroup", tuple]:
        """Standalone table of a subgroup plus its embedding (new index -> old)."""
        elems = [self.identity] + sorted(set(elements) - {self.identity})
        pos = {x: i for i, x in enumerate(elems)}
        try:
            table = [[pos[self.table[a][b]] for b in elems] for a in elems]
        except KeyError:
            raise GroupTableError("elements are not closed under multiplication") from None
        return FiniteGroup(table, 0, validate=False), tuple(elems)

    def relabel(self, perm: Sequence[int]) -> "FiniteGroup":
        """Isomorphic copy in which old element ``x`` gets index ``perm[x]``."""
        inv = [0] * self.order
        for old, new in enumerate(perm):
            inv[new] = old
        table = [[perm[self.table[inv[a]][inv[b]]] for b in range(self.order)]
                 for a in range(self.order)]
        return FiniteGroup(table, perm[self.identity], self.name)

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(a))

    def to_json(self) -> dict:
        return {"order": self.order, "identity": self.identity,
                "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        for key in ("order", "identity", "table"):
            if key not in data:
                raise GroupTableError(f"missing field {key!r}")
        g = cls(data["table"], data["identity"])
        if g.order != data["order"]:
            raise GroupTableError(f"order {data['order']} does not match table size {g.order}")
        return g

    def __eq__(self, other):
        if isinstance(other, FiniteGroup):
            return self.table == other.table and self.identity == other.identity
        return NotImplemented

    def __hash__(self):
        return hash((self.table, self.identity))

    def __repr__(self):
        return f"FiniteGroup(order={self.order}{', ' + self.name if self.name else ''})"


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/d1 + Z/d2 + ...`` with ``d1 | d2 | ...`` and each ``di >= 2``."""

    divisors: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        ds = tuple(int(d) for d in self.divisors)
        if any(d < 2 for d in ds):
            raise ValueError("invariant factors must be >= 2")
        if any(ds[i + 1] % ds[i] for i in range(len(ds) - 1)):
            raise ValueError(f"{ds} is not a divisibility chain")
        object.__setattr__(self, "divisors", ds)

    @classmethod
    def from_orders(cls, orders, free_rank: int = 0) -> "AbelianInvariants":
        """Normalize any list of cyclic orders into invariant factors."""
        from sympy import factorint

        by_prime: dict[int, list[int]] = {}
        for n in orders:
            n = int(n)
            if n == 0:
                free_rank += 1
                continue
            for p, e in factorint(n).items():
                by_prime.setdefault(p, []).append(p ** e)
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for powers in by_prime.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[width - 1 - i] *= q
        return cls(tuple(f for f in factors if f > 1), free_rank)

    @property
    def is_trivial(self) -> bool:
        return not self.divisors and not self.free_rank

    @property
    def order(self) -> int | None:
        return None if self.free_rank else math.prod(self.divisors)

    def two_part(self) -> "AbelianInvariants":
        return AbelianInvariants.from_orders([d & -d for d in self.divisors if d % 2 == 0])

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.divisors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"divisors": list(self.divisors), "free_rank": self.free_rank, "text": str(self)}


# --- bar resolution ------------------------------------------------------

def _bar_index(g: FiniteGroup):
    nonid = [x for x in range(g.order) if x != g.identity]
    return nonid, {x: i for i, x in enumerate(nonid)}


def bar_boundary(g: FiniteGroup, n: int) -> IntMatrix:
    """``d_n : C_n -> C_{n-1}`` of the normalized bar complex with trivial Z coefficients.

    ``d[g1|...|gn] = [g2|...|gn] + sum_i (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [g1|...|g_{n-1}]``.
    Bars are indexed in base ``m - 1`` with the first entry most significant.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _bar_boundary_cached(g, n)


@lru_cache(maxsize=64)
def _bar_boundary_cached(g: FiniteGroup, n: int) -> IntMatrix:
    nonid, pos = _bar_index(g)
    b = len(nonid)
    e = g.identity
    T = g.table
    rows = b ** (n - 1)

    def index(bar) -> int:
        k = 0
        for x in bar:
            k = k * b + pos[x]
        return k

    columns = []
    for bar in itertools.product(nonid, repeat=n):
        col: dict[int, int] = {}
        if n > 1:
            k = index(bar[1:])
            col[k] = col.get(k, 0) + 1
            for i in range(1, n):
                y = T[bar[i - 1]][bar[i]]
                if y != e:
                    k = index(bar[: i - 1] + (y,) + bar[i + 1:])
                    col[k] = col.get(k, 0) + (-1) ** i
            k = index(bar[:-1])
            col[k] = col.get(k, 0) + (-1) ** n
        columns.append({k: v for k, v in col.items() if v})
    return IntMatrix(rows, len(columns), tuple(columns))


def bar_coboundary(g: FiniteGroup, n: int) -> IntMatrix:
    """``delta^n : C^n -> C^{n+1}`` built straight from the cochain formula.

    ``(delta phi)(g1..g_{n+1}) = phi(g2..) + sum_i (-1)^i phi(..g_i g_{i+1}..)
    + (-1)^{n+1} phi(g1..g_n)``; rows are (n+1)-bars, columns n-bars.
    Normalized cochains vanish on bars containing the identity.
    """
    nonid, pos = _bar_index(g)
    b = len(nonid)
    e = g.identity
    T = g.table
    cols: list[dict[int, int]] = [dict() for _ in range(b ** n)]

    def index(bar) -> int:
        k = 0
        for x in bar:
            k = k * b + pos[x]
        return k

    for r, bar in enumerate(itertools.product(nonid, repeat=n + 1)):
        if n == 0:
            continue  # delta^0 = 0 with trivial coefficients
        faces = [(bar[1:], 1)]
        for i in range(1, n + 1):
            y = T[bar[i - 1]][bar[i]]
            if y != e:
                faces.append((bar[: i - 1] + (y,) + bar[i + 1:], (-1) ** i))
        faces.append((bar[:-1], (-1) ** (n + 1)))
        for face, sgn in faces:
            c = cols[index(face)]
            c[r] = c.get(r, 0) + sgn
    cols = [{r: v for r, v in c.items() if v} for c in cols]
    return IntMatrix(b ** (n + 1), len(cols), tuple(cols))


@lru_cache(maxsize=64)
def _boundary_snf(g: FiniteGroup, n: int):
    return smith_normal_form(bar_boundary(g, n))


def _check_budget(g: FiniteGroup, n: int, max_order: int | None) -> None:
    if not 1 <= n <= 3:
        raise ValueError("degrees 1..3 are supported")
    limit = max_order if max_order is not None else max_order_for(n)
    if g.order > limit:
        raise SizeBudgetError(f"order {g.order} exceeds budget {limit} for degree {n}")


def homology(g: FiniteGroup, n: int, max_order: int | None = None) -> AbelianInvariants:
    """``H_n(G; Z) = ker d_n / im d_{n+1}`` via Smith normal form."""
    _check_budget(g, n, max_order)
    dim = (g.order - 1) ** n
    upper = _boundary_snf(g, n + 1)
    lower_rank = _boundary_snf(g, n).rank if n > 1 else 0
    free = dim - lower_rank - upper.rank
    return AbelianInvariants.from_orders(upper.torsion, free)


def _cohomology_direct(g: FiniteGroup, n: int) -> AbelianInvariants:
    dim = (g.order - 1) ** n
    into = smith_normal_form(bar_coboundary(g, n - 1)) if n > 1 else None
    out_rank = smith_normal_form(bar_coboundary(g, n)).rank
    torsion = into.torsion if into else ()
    in_rank = into.rank if into else 0
    return AbelianInvariants.from_orders(torsion, dim - out_rank - in_rank)


def _cohomology_uct(g: FiniteGroup, n: int, max_order: int | None) -> AbelianInvariants:
    # H^n = Hom(H_n, Z) + Ext(H_{n-1}, Z); for finite G, H_n has no free part.
    free = homology(g, n, max_order).free_rank
    lower = homology(g, n - 1, max_order).divisors if n > 1 else ()
    return AbelianInvariants(lower, free)


def cohomology(g: FiniteGroup, n: int, route: str = "auto",
               max_order: int | None = None) -> AbelianInvariants:
    """``H^n(G; Z)``.

    ``route``: ``"uct"`` (from homology), ``"direct"`` (cochain complex),
    ``"both"`` (cross-checked), or ``"auto"``, which cross-checks whenever
    the direct route fits its budget.
    """
    _check_budget(g, n, max_order)
    direct_ok = n < 3 or g.order <= DIRECT_COCHAIN_MAX_ORDER
    if route == "direct":
        if not direct_ok:
            raise SizeBudgetError(f"direct cochain route limited to order {DIRECT_COCHAIN_MAX_ORDER} at n=3")
        return _cohomology_direct(g, n)
    if route == "uct":
        return _cohomology_uct(g, n, max_order)
    if route not in ("auto", "both"):
        raise ValueError(f"unknown route {route!r}")
    uct = _cohomology_uct(g, n, max_order)
    if route == "both" and not direct_ok:
        raise SizeBudgetError(f"direct cochain route limited to order {DIRECT_COCHAIN_MAX_ORDER} at n=3")
    if direct_ok:
        direct = _cohomology_direct(g, n)
        if direct != uct:
            raise CrossCheckError(f"H^{n}: direct {direct} != UCT {uct}")
    return uct


def schur_multiplier(g: FiniteGroup, max_order: int | None = None) -> AbelianInvariants:
    return homology(g, 2, max_order)


def sylow_2(g: FiniteGroup) -> tuple[FiniteGroup, tuple]:
    """A Sylow 2-subgroup and its embedding (new index -> index in ``g``).

    Grows a 2-subgroup by adjoining 2-elements while the generated subgroup
    stays a 2-group; a proper 2-subgroup always has such an extension inside
    its normalizer, so this reaches full 2-part order.
    """
    target = g.order & -g.order
    two_elems = [x for x in range(g.order)
                 if x != g.identity and g.element_order(x) & (g.element_order(x) - 1) == 0]
    H = frozenset([g.identity])
    gens: list[int] = []
    while len(H) < target:
        for x in two_elems:
            if x in H:
                continue
            K = g.closure(gens + [x])
            if len(K) & (len(K) - 1) == 0:
                H, gens = K, gens + [x]
                break
        else:  # pragma: no cover - impossible by Sylow theory
            raise AssertionError("failed to extend 2-subgroup")
    return g.subgroup(H)


def recognize_2group(g: FiniteGroup) -> str:
    """``"cyclic"``, ``"generalized_quaternion"`` or ``"other"``."""
    m = g.order
    if m & (m - 1):
        raise ValueError(f"order {m} is not a power of 2")
    orders = [g.element_order(x) for x in range(m)]
    if m in orders:
        return "cyclic"
    if m >= 8 and orders.count(2) == 1:
        return "generalized_quaternion"
    return "other"


@dataclass
class HolonomyVerdict:
    verdict: str  # bounds_spinc_route | bounds_DF_route | inconclusive
    sylow_order: int
    sylow_type: str
    sylow_multiplier: AbelianInvariants
    spinc_route: bool
    df_route: bool
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "sylow_order": self.sylow_order,
            "sylow_type": self.sylow_type,
            "sylow_multiplier": self.sylow_multiplier.to_json(),
            "spinc_route": self.spinc_route,
            "df_route": self.df_route,
            "notes": list(self.notes),
        }


def holonomy_verdict(g: FiniteGroup, max_order: int | None = None) -> HolonomyVerdict:
    """Sufficient conditions for an almost flat manifold with holonomy ``g`` to bound.

    Only positive conclusions are ever drawn; ``inconclusive`` means neither
    criterion applies, not that the manifold fails to bound.
    """
    P, _ = sylow_2(g)
    limit = max_order if max_order is not None else max_order_for(2)
    if P.order > limit:
        raise SizeBudgetError(f"Sylow 2-subgroup of order {P.order} exceeds budget {limit}")
    mult = schur_multiplier(P, max_order=limit)
    kind = recognize_2group(P)
    spinc = mult.is_trivial
    df = kind in ("cyclic", "generalized_quaternion")
    notes = []
    if spinc:
        notes.append("H_2(Syl_2) = 0, so H^3(Syl_2) = 0: the manifold is spin^c and bounds orientably")
    if df:
        notes.append(f"Sylow 2-subgroup is {kind.replace('_', ' ')}: cyclic/quaternion criterion applies")
    if spinc:
        verdict = "bounds_spinc_route"
    elif df:
        verdict = "bounds_DF_route"
    else:
        verdict = "inconclusive"
        notes.append("Schur multiplier has even order; no sufficient condition applies")
    return HolonomyVerdict(verdict, P.order, kind, mult, spinc, df, notes)


# --- named groups --------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], 0, f"cyclic:{n}")


def quaternion_group(order: int) -> FiniteGroup:
    """Generalized quaternion ``<a, b | a^(2m) = 1, b^2 = a^m, b a b^-1 = a^-1>``."""
    if order < 4 or order & (order - 1):
        raise ValueError("quaternion order must be a power of 2, at least 4")
    M = order // 2  # order of a
    elems = [(k, e) for e in (0, 1) for k in range(M)]
    pos = {x: i for i, x in enumerate(elems)}

    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        if e1 == 0:
            return ((k1 + k2) % M, e2)
        if e2 == 0:
            return ((k1 - k2) % M, 1)
        return ((k1 - k2 + M // 2) % M, 0)

    table = [[pos[mul(x, y)] for y in elems] for x in elems]
    return FiniteGroup(table, 0, f"quaternion:{order}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order ``2n``."""
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")
    elems = [(k, e) for e in (0, 1) for k in range(n)]
    pos = {x: i for i, x in enumerate(elems)}

    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        return ((k1 + (k2 if e1 == 0 else -k2)) % n, e1 ^ e2)

    return FiniteGroup([[pos[mul(x, y)] for y in elems] for x in elems], 0, f"dihedral:{n}")


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 4:
        raise SizeBudgetError("symmetric groups limited to n <= 4")
    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = [[pos[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, pos[tuple(range(n))], f"symmetric:{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    if a.order * b.order > MAX_GROUP_ORDER:
        raise SizeBudgetError(f"product order {a.order * b.order} exceeds {MAX_GROUP_ORDER}")
    m = b.order
    table = [[a.table[i // m][j // m] * m + b.table[i % m][j % m]
              for j in range(a.order * m)] for i in range(a.order * m)]
    return FiniteGroup(table, a.identity * m + b.identity, f"product:{a.name},{b.name}")


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out]


def named_group(spec: str) -> FiniteGroup:
    """Build ``cyclic:8``, ``quaternion:16``, ``dihedral:4`` (order 8),
    ``symmetric:4``, ``product:cyclic:2,cyclic:2`` (parentheses nest products)."""
    spec = spec.strip()
    if spec.startswith("(") and spec.endswith(")"):
        spec = spec[1:-1]
    name, _, arg = spec.partition(":")
    if name == "product":
        factors = _split_top(arg)
        if len(factors) < 2:
            raise ValueError("product needs at least two factors")
        g = named_group(factors[0])
        for f in factors[1:]:
            g = direct_product(g, named_group(f))
        g.name = spec
        return g
    builders = {"cyclic": cyclic_group, "quaternion": quaternion_group,
                "dihedral": dihedral_group, "symmetric": symmetric_group}
    if name not in builders:
        raise ValueError(f"unknown group name {name!r}")
    try:
        k = int(arg)
    except ValueError:
        raise ValueError(f"bad parameter {arg!r} for {name}") from None
    order = {"cyclic": k, "quaternion": k, "dihedral": 2 * k, "symmetric": math.factorial(max(k, 0))}[name]
    if k < 1:
        raise ValueError(f"parameter for {name} must be positive")
    if order > MAX_GROUP_ORDER:
        raise SizeBudgetError(f"{spec} has order {order} > {MAX_GROUP_ORDER}")
    return builders[name](k)

