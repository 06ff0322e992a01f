"""Hypothesis classes over countable domains.

Explicit classes are dense 0/1 matrices over a finite ordered domain.
Parametric families (thresholds, bounded-support indicators) are evaluated
lazily by formula and never materialized unless asked. Countable unions
expose indexed components, each with a declared complexity. Probability
measures over countable supports use exact rational masses.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

Point = str | int | Fraction
Label = int


class DomainError(ValueError):
    """A point outside the declared domain, or a malformed definition."""


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

def parse_point(raw) -> Point:
    """Decode a point from its JSON form.

    Integers stay integers, strings containing "/" become exact rationals,
    all other strings are opaque identifiers.
    """
    if isinstance(raw, bool):
        raise DomainError(f"boolean is not a valid point: {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        if "/" in raw:
            try:
                return Fraction(raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(f"bad rational point {raw!r}") from exc
        return raw
    raise DomainError(f"unsupported point value: {raw!r}")


def point_to_json(p: Point):
    """Encode a point for JSON. Rationals keep an explicit denominator."""
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return p


def format_point(p: Point) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return str(p)


# ---------------------------------------------------------------------------
# hypotheses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypothesis:
    """A single labeling rule: a total 0/1 function on the domain."""

    id: int | str
    fn: Callable[[Point], int]

    def __call__(self, x: Point) -> int:
        return self.fn(x)


def constant_hypothesis(value: int, hid: int | str | None = None) -> Hypothesis:
    if value not in (0, 1):
        raise DomainError(f"constant must be 0 or 1, got {value!r}")
    return Hypothesis(hid if hid is not None else f"const-{value}", lambda x: value)


def threshold_hypothesis(cut: int | Fraction, hid: int | str | None = None) -> Hypothesis:
    """Indicator of x >= cut over a numerically ordered domain."""
    def fn(x: Point) -> int:
        if isinstance(x, str):
            raise DomainError(f"threshold needs a numeric point, got {x!r}")
        return int(x >= cut)
    return Hypothesis(hid if hid is not None else f"thr-{format_point(cut)}", fn)


def support_hypothesis(points: Sequence[Point], hid: int | str | None = None) -> Hypothesis:
    """Indicator of a finite support set."""
    supp = frozenset(points)
    name = hid if hid is not None else "supp-{" + ",".join(sorted(map(format_point, supp))) + "}"
    return Hypothesis(name, lambda x: int(x in supp))


def row_hypothesis(domain: Sequence[Point], values: Sequence[int],
                   hid: int | str | None = None) -> Hypothesis:
    table = dict(zip(domain, values))
    if len(table) != len(domain):
        raise DomainError("duplicate points in row hypothesis domain")

    def fn(x: Point) -> int:
        try:
            return table[x]
        except KeyError:
            raise DomainError(f"point {x!r} outside hypothesis domain") from None
    return Hypothesis(hid if hid is not None else tuple(values), fn)


def hypothesis_from_config(spec: dict) -> Hypothesis:
    """Build a hypothesis from its JSON spec.

    Forms: {"kind":"constant","value":0|1}, {"kind":"threshold","value":"1/2"},
    {"kind":"support","points":[...]}, {"kind":"row","domain":[...],"values":[...]}.
    """
    kind = spec.get("kind")
    if kind == "constant":
        return constant_hypothesis(spec["value"])
    if kind == "threshold":
        cut = parse_point(spec["value"])
        if isinstance(cut, str):
            raise DomainError(f"threshold cut must be numeric: {spec['value']!r}")
        return threshold_hypothesis(cut)
    if kind == "support":
        return support_hypothesis([parse_point(p) for p in spec["points"]])
    if kind == "row":
        return row_hypothesis([parse_point(p) for p in spec["domain"]], spec["values"])
    raise DomainError(f"unknown hypothesis kind: {kind!r}")


# ---------------------------------------------------------------------------
# explicit finite classes
# ---------------------------------------------------------------------------

class FiniteClass:
    """An explicit hypothesis class: a |H| x |domain| table of 0/1 values.

    Rows are distinct by construction; duplicate hypotheses are rejected so
    that |H| is an honest count for the oracles.
    """

    def __init__(self, domain: Sequence[Point], rows: Sequence[Sequence[int]],
                 labels: Sequence[int | str] | None = None):
        self.domain: tuple[Point, ...] = tuple(domain)
        if len(set(self.domain)) != len(self.domain):
            raise DomainError("duplicate points in domain")
        if not self.domain:
            raise DomainError("domain must contain at least one point")
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(int(v) for v in r) for r in rows)
        for r in self.rows:
            if len(r) != len(self.domain):
                raise DomainError(f"row width {len(r)} != domain size {len(self.domain)}")
            if any(v not in (0, 1) for v in r):
                raise DomainError(f"row values must be 0/1: {r}")
        if len(set(self.rows)) != len(self.rows):
            raise DomainError("duplicate hypothesis rows rejected")
        if labels is None:
            labels = tuple(range(len(self.rows)))
        self.labels: tuple[int | str, ...] = tuple(labels)
        if len(self.labels) != len(self.rows):
            raise DomainError("label count does not match row count")
        if len(set(self.labels)) != len(self.labels):
            raise DomainError("duplicate hypothesis labels")
        self._pindex = {p: j for j, p in enumerate(self.domain)}

    # -- basics ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def is_empty(self) -> bool:
        return not self.rows

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) for r in self.rows)
        return f"FiniteClass(domain={list(self.domain)!r}, rows=[{rows}])"

    def point_index(self, x: Point) -> int:
        try:
            return self._pindex[x]
        except KeyError:
            raise DomainError(f"point {x!r} not in class domain") from None

    def column(self, x: Point) -> tuple[int, ...]:
        j = self.point_index(x)
        return tuple(r[j] for r in self.rows)

    def value(self, i: int, x: Point) -> int:
        """Value of the i-th row (by position) at x."""
        return self.rows[i][self.point_index(x)]

    def hypothesis(self, label: int | str) -> Hypothesis:
        i = self.labels.index(label)
        return row_hypothesis(self.domain, self.rows[i], hid=label)

    def hypotheses(self) -> list[Hypothesis]:
        return [row_hypothesis(self.domain, r, hid=l) for l, r in zip(self.labels, self.rows)]

    # -- restriction ---------------------------------------------------------

    def restrict(self, x: Point, y: int) -> "FiniteClass":
        """Sub-class of rows taking value y at x. May be empty. Ids preserved."""
        if y not in (0, 1):
            raise DomainError(f"label must be 0 or 1, got {y!r}")
        j = self.point_index(x)
        keep = [i for i, r in enumerate(self.rows) if r[j] == y]
        sub = object.__new__(FiniteClass)
        sub.domain = self.domain
        sub.rows = tuple(self.rows[i] for i in keep)
        sub.labels = tuple(self.labels[i] for i in keep)
        sub._pindex = self._pindex
        return sub

    # -- constructors --------------------------------------------------------

    @classmethod
    def full_class(cls, domain: Sequence[Point]) -> "FiniteClass":
        """All 2^m labelings of an m-point domain, in binary-counter order."""
        rows = list(product((0, 1), repeat=len(domain)))
        return cls(domain, rows)

    @classmethod
    def thresholds(cls, domain: Sequence[int | Fraction],
                   cuts: Sequence[int | Fraction]) -> "FiniteClass":
        """Rows 1_{x >= cut} for each cut, over a numeric domain."""
        rows = [[int(x >= c) for x in domain] for c in cuts]
        return cls(domain, rows, labels=[f"thr-{format_point(c)}" for c in cuts])

    @classmethod
    def from_config(cls, spec: dict) -> "FiniteClass":
        domain = [parse_point(p) for p in spec["domain"]]
        return cls(domain, spec["hypotheses"], labels=spec.get("labels"))

    def to_config(self) -> dict:
        return {
            "domain": [point_to_json(p) for p in self.domain],
            "hypotheses": [list(r) for r in self.rows],
            "labels": list(self.labels),
        }


# ---------------------------------------------------------------------------
# structured (non-materialized) classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingletonClass:
    """A one-hypothesis class; shatters nothing, so its dimension is 0."""

    hypothesis: Hypothesis
    dim: int = 0


@dataclass(frozen=True)
class FiniteSupportClass:
    """All indicators of at most `budget` points from a finite domain.

    Kept symbolic: version spaces of this class stay of the form
    (forced-one set, forced-zero set), so learners never need the dense
    matrix. `materialize` builds the matrix for small instances.
    """

    domain: tuple[Point, ...]
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise DomainError("support budget must be >= 0")
        if len(set(self.domain)) != len(self.domain):
            raise DomainError("duplicate points in domain")

    @property
    def dim(self) -> int:
        # a shattered tree uses distinct points along any root-to-leaf path,
        # so depth <= budget (ones on the all-ones path) and depth <= |domain|
        return min(self.budget, len(self.domain))

    def size(self) -> int:
        from math import comb
        return sum(comb(len(self.domain), j) for j in range(self.budget + 1))

    def materialize(self, max_rows: int = 20000) -> FiniteClass:
        if self.size() > max_rows:
            raise DomainError(
                f"refusing to materialize {self.size()} rows (cap {max_rows})")
        rows, labels = [], []
        for sz in range(self.budget + 1):
            for supp in combinations(range(len(self.domain)), sz):
                rows.append([int(j in supp) for j in range(len(self.domain))])
                labels.append("supp-" + ",".join(str(j) for j in supp))
        return FiniteClass(self.domain, rows, labels=labels)


# ---------------------------------------------------------------------------
# countable unions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyComponent:
    """One indexed component of a countable union, plus its declared dimension."""

    index: int
    cls: FiniteClass | SingletonClass | FiniteSupportClass
    dim: int


def rationals_unit_interval():
    """Enumerate Q in [0,1] without repeats: endpoints, then breadth-first
    mediants of the Stern-Brocot tree restricted to the unit interval."""
    yield Fraction(0)
    yield Fraction(1)
    level = [(Fraction(0), Fraction(1))]
    while True:
        nxt = []
        for lo, hi in level:
            mid = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
            yield mid
            nxt.append((lo, mid))
            nxt.append((mid, hi))
        level = nxt


class ClassFamily:
    """A countable union of component classes, enumerable in index order."""

    kind: str = "abstract"

    def component(self, n: int) -> FamilyComponent:
        if n < 1:
            raise DomainError(f"component index must be >= 1, got {n}")
        return self._component(n)

    def _component(self, n: int) -> FamilyComponent:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


class ExplicitListFamily(ClassFamily):
    """A finite list of explicit classes; indices past the end repeat the
    last class so the family stays total over all positive indices."""

    kind = "explicit-list"

    def __init__(self, classes: Sequence[FiniteClass], check_dims: Sequence[int] | None = None):
        if not classes:
            raise DomainError("explicit-list family needs at least one class")
        self.classes = list(classes)
        from .littlestone import ldim  # deferred: littlestone depends on this module
        self.dims = [ldim(c) for c in self.classes]
        if check_dims is not None and list(check_dims) != self.dims:
            raise DomainError(
                f"declared dims {list(check_dims)} != computed {self.dims}")

    def _component(self, n: int) -> FamilyComponent:
        i = min(n, len(self.classes)) - 1
        return FamilyComponent(n, self.classes[i], self.dims[i])

    def to_config(self) -> dict:
        return {"family": self.kind,
                "params": {"classes": [c.to_config() for c in self.classes]}}


class RationalThresholdFamily(ClassFamily):
    """Singleton components {1_{x >= q_n}} with q_n the Stern-Brocot
    enumeration of Q in [0,1]."""

    kind = "rational-thresholds"

    def __init__(self):
        self._gen = rationals_unit_interval()
        self._cuts: list[Fraction] = []

    def cut(self, n: int) -> Fraction:
        while len(self._cuts) < n:
            self._cuts.append(next(self._gen))
        return self._cuts[n - 1]

    def _component(self, n: int) -> FamilyComponent:
        return FamilyComponent(n, SingletonClass(threshold_hypothesis(self.cut(n))), 0)

    def to_config(self) -> dict:
        return {"family": self.kind, "params": {}}


class NaturalThresholdFamily(ClassFamily):
    """Singleton components {1_{x >= n-1}} over the positive integers."""

    kind = "natural-thresholds"

    def _component(self, n: int) -> FamilyComponent:
        return FamilyComponent(n, SingletonClass(threshold_hypothesis(n - 1)), 0)

    def to_config(self) -> dict:
        return {"family": self.kind, "params": {}}


class FiniteSupportFamily(ClassFamily):
    """Components H_n = indicators of at most n points from a fixed finite
    domain. The declared dimension min(n, |domain|) is exact; tests validate
    it against the generic recursion on small truncations."""

    kind = "finite-support"

    def __init__(self, domain: Sequence[Point]):
        self.domain = tuple(domain)
        if not self.domain:
            raise DomainError("finite-support family needs a non-empty domain")

    def _component(self, n: int) -> FamilyComponent:
        budget = min(n, len(self.domain))
        comp = FiniteSupportClass(self.domain, budget)
        return FamilyComponent(n, comp, comp.dim)

    def to_config(self) -> dict:
        return {"family": self.kind,
                "params": {"domain": [point_to_json(p) for p in self.domain]}}


def family_from_config(spec: dict) -> ClassFamily:
    kind = spec.get("family")
    params = spec.get("params", {})
    if kind == "explicit-list":
        return ExplicitListFamily([FiniteClass.from_config(c) for c in params["classes"]])
    if kind == "rational-thresholds":
        return RationalThresholdFamily()
    if kind == "natural-thresholds":
        return NaturalThresholdFamily()
    if kind == "finite-support":
        return FiniteSupportFamily([parse_point(p) for p in params["domain"]])
    raise DomainError(f"unknown family kind: {kind!r}")


def family_component(family: ClassFamily, n: int) -> FamilyComponent:
    """Indexed component access; repeated calls return identical components."""
    return family.component(n)


# ---------------------------------------------------------------------------
# discrete measures
# ---------------------------------------------------------------------------

class DiscreteMeasure:
    """A probability measure on a finite support with exact rational masses."""

    def __init__(self, support: Sequence[Point], masses: Sequence[Fraction | str | int]):
        self.support: tuple[Point, ...] = tuple(support)
        self.masses: tuple[Fraction, ...] = tuple(Fraction(m) for m in masses)
        if len(self.support) != len(self.masses):
            raise DomainError("support and mass lengths differ")
        if len(set(self.support)) != len(self.support):
            raise DomainError("duplicate support points")
        if not self.support:
            raise DomainError("empty support")
        if any(m <= 0 for m in self.masses):
            raise DomainError("masses must be positive")
        if sum(self.masses) != 1:
            raise DomainError(f"masses sum to {sum(self.masses)}, expected 1")
        cum = []
        acc = 0.0
        for m in self.masses:
            acc += float(m)
            cum.append(acc)
        cum[-1] = 1.0
        self._cum = cum

    def mass(self, i: int) -> Fraction:
        """Mass of the i-th support point (1-based)."""
        return self.masses[i - 1]

    def sample(self, rng: random.Random) -> Point:
        u = rng.random()
        for p, c in zip(self.support, self._cum):
            if u < c:
                return p
        return self.support[-1]

    @classmethod
    def point_mass(cls, p: Point) -> "DiscreteMeasure":
        return cls([p], [Fraction(1)])

    @classmethod
    def uniform(cls, points: Sequence[Point]) -> "DiscreteMeasure":
        n = len(points)
        return cls(points, [Fraction(1, n)] * n)

    @classmethod
    def geometric(cls, points: Sequence[Point]) -> "DiscreteMeasure":
        """Masses 2^-i with the truncation residual folded into the last point:
        the i-th point gets 2^-i, the last gets 2^-(m-1)."""
        m = len(points)
        if m < 1:
            raise DomainError("geometric measure needs at least one point")
        masses = [Fraction(1, 2 ** i) for i in range(1, m)]
        masses.append(1 - sum(masses, Fraction(0)))
        return cls(points, masses)

    @classmethod
    def from_config(cls, spec: dict) -> "DiscreteMeasure":
        return cls([parse_point(p) for p in spec["support"]],
                   [Fraction(m) for m in spec["mass"]])

    def to_config(self) -> dict:
        return {"support": [point_to_json(p) for p in self.support],
                "mass": [f"{m.numerator}/{m.denominator}" for m in self.masses]}
