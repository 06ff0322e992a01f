"""Realizable-setting learners behind one protocol: observe a point,
predict a label, absorb the revealed truth.

`predict` is a pure function of the interaction history (plus recorded
random draws for the randomized learners in `fpl`), so calling it twice
within a round is safe. `update` advances the round and counts mistakes
against the learner's own prediction.

Each learner instance is a single-owner state machine; distinct instances
may run in parallel games without any shared state.
"""
from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from .hypotheses import (DomainError, FamilyComponent, FiniteClass,
                         FiniteSupportClass, Hypothesis, Point,
                         SingletonClass, ClassFamily)
from .littlestone import VersionSpace, soa_prediction


class ProtocolError(RuntimeError):
    """A feed the learner's contract rules out (e.g. a non-realizable label
    sequence emptied the version space). Carries the violating round."""

    def __init__(self, message: str, round_index: int | None = None):
        if round_index is not None:
            message = f"round {round_index}: {message}"
        super().__init__(message)
        self.round_index = round_index


class OnlineLearner:
    """Base of the observe/predict/reveal protocol."""

    deterministic = True

    def __init__(self):
        self.t = 1              # next round, 1-based
        self.mistakes = 0

    def predict(self, x: Point) -> int:
        raise NotImplementedError

    def update(self, x: Point, y: int) -> None:
        if y not in (0, 1):
            raise ProtocolError(f"label must be 0 or 1, got {y!r}", self.t)
        p = self.predict(x)
        mistake = p != y
        if mistake:
            self.mistakes += 1
        self._absorb(x, y, p)
        self.t += 1

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        pass


class ConstantLearner(OnlineLearner):
    def __init__(self, value: int):
        super().__init__()
        self.value = int(value)

    def predict(self, x: Point) -> int:
        return self.value


class FollowHypothesisLearner(OnlineLearner):
    """Always predicts a fixed hypothesis; equivalently, the version-space
    learner on a singleton class."""

    def __init__(self, hypothesis: Hypothesis):
        super().__init__()
        self.hypothesis = hypothesis

    def predict(self, x: Point) -> int:
        return self.hypothesis(x)


class SoaLearner(OnlineLearner):
    """Version-space learner predicting the label whose restriction keeps
    the larger dimension (ties to 0).

    By default the space is restricted only on mistaken rounds;
    `always_restrict` switches to restricting on every round. `on_empty`
    decides what an update that would empty the space does: "error" raises
    (the realizable contract), "freeze" keeps the space unchanged, which
    keeps the learner total on arbitrary feeds.
    """

    def __init__(self, cls: FiniteClass, *, always_restrict: bool = False,
                 on_empty: str = "error"):
        super().__init__()
        if on_empty not in ("error", "freeze"):
            raise ValueError(f"on_empty must be 'error' or 'freeze', got {on_empty!r}")
        self.space = VersionSpace.full(cls)
        self.always_restrict = always_restrict
        self.on_empty = on_empty

    def predict(self, x: Point) -> int:
        if self.space.is_empty:
            raise ProtocolError("version space is empty (non-realizable feed)", self.t)
        return soa_prediction(self.space, x)

    def _should_restrict(self, mistake: bool) -> bool:
        return mistake or self.always_restrict

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        if not self._should_restrict(predicted != y):
            return
        nxt = self.space.restrict(x, y)
        if nxt.is_empty:
            if self.on_empty == "error":
                raise ProtocolError(
                    f"restriction by ({x!r}, {y}) empties the version space", self.t)
            return
        self.space = nxt


class ExpertLearner(SoaLearner):
    """Version-space learner that restricts only on mistaken rounds whose
    index lies in a fixed, strictly increasing key. The empty key never
    updates and plays the root predictions forever."""

    def __init__(self, cls: FiniteClass, key: Sequence[int], *, on_empty: str = "error"):
        super().__init__(cls, on_empty=on_empty)
        key = tuple(key)
        if any(b <= a for a, b in zip(key, key[1:])) or any(i < 1 for i in key):
            raise ValueError(f"key must be strictly increasing positive rounds: {key}")
        self.key = key
        self._keyset = frozenset(key)

    def _should_restrict(self, mistake: bool) -> bool:
        return mistake and self.t in self._keyset


def support_prediction(cls: FiniteSupportClass, ones: frozenset, zeros: frozenset,
                       x: Point) -> int:
    """Larger-dimension label for a bounded-support version space.

    Such spaces always have the shape (forced-one set, forced-zero set),
    whose dimension is min(remaining budget, free points) in closed form,
    so the comparison never materializes a matrix. Same tie rules as
    `soa_prediction`.
    """
    if x not in cls.domain:
        raise DomainError(f"point {x!r} not in class domain")
    if x in ones:
        return 1
    if x in zeros:
        return 0
    budget = cls.budget - len(ones)
    if budget <= 0:
        return 0
    free = len(cls.domain) - len(ones) - len(zeros)
    dim_one = min(budget - 1, free - 1)
    dim_zero = min(budget, free - 1)
    return 1 if dim_one > dim_zero else 0


def support_restriction(cls: FiniteSupportClass, ones: frozenset, zeros: frozenset,
                        x: Point, y: int):
    """Restricted (ones, zeros) pair, or None if the restriction is empty."""
    if x in ones:
        return (ones, zeros) if y == 1 else None
    if x in zeros:
        return (ones, zeros) if y == 0 else None
    if y == 1:
        if len(ones) >= cls.budget:
            return None
        return (ones | {x}, zeros)
    return (ones, zeros | {x})


class FiniteSupportSoa(OnlineLearner):
    """Version-space learner for bounded-support indicator classes.

    Mirrors the generic matrix learner's predictions exactly, which the
    tests cross-check on materialized small instances.
    """

    def __init__(self, cls: FiniteSupportClass, *, on_empty: str = "error"):
        super().__init__()
        if on_empty not in ("error", "freeze"):
            raise ValueError(f"on_empty must be 'error' or 'freeze', got {on_empty!r}")
        self.cls = cls
        self.ones: frozenset[Point] = frozenset()
        self.zeros: frozenset[Point] = frozenset()
        self.on_empty = on_empty

    def predict(self, x: Point) -> int:
        return support_prediction(self.cls, self.ones, self.zeros, x)

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        if predicted == y:
            return
        nxt = support_restriction(self.cls, self.ones, self.zeros, x, y)
        if nxt is None:
            if self.on_empty == "error":
                raise ProtocolError(
                    f"restriction by ({x!r}, {y}) empties the version space", self.t)
            return
        self.ones, self.zeros = nxt


def make_component_learner(component: FamilyComponent | FiniteClass | SingletonClass
                           | FiniteSupportClass, *, on_empty: str = "error") -> OnlineLearner:
    """The per-component version-space learner, dispatched on representation."""
    cls = component.cls if isinstance(component, FamilyComponent) else component
    if isinstance(cls, FiniteClass):
        return SoaLearner(cls, on_empty=on_empty)
    if isinstance(cls, SingletonClass):
        return FollowHypothesisLearner(cls.hypothesis)
    if isinstance(cls, FiniteSupportClass):
        return FiniteSupportSoa(cls, on_empty=on_empty)
    raise TypeError(f"no learner for component type {type(cls).__name__}")


class AggregatorLearner(OnlineLearner):
    """Index-penalized selector over the per-component learners of a
    countable union.

    Every instantiated sub-learner is fed every revealed pair, so its
    counter equals the mistakes it would have made running standalone.
    The round's selector is argmin of (counter + index), ties to the
    smallest index. Indices above min(counter + index) can never win the
    argmin, so sub-learners are instantiated lazily up to that bound; a
    late instantiation replays the full history to keep its counter honest.
    """

    def __init__(self, family: ClassFamily):
        super().__init__()
        self.family = family
        self.sub: dict[int, OnlineLearner] = {}
        self.history: list[tuple[Point, int]] = []
        self.selected: Optional[int] = None
        self._ensure(1)

    def _ensure(self, n: int) -> None:
        if n in self.sub:
            return
        learner = make_component_learner(self.family.component(n), on_empty="freeze")
        for x, y in self.history:
            learner.update(x, y)
        self.sub[n] = learner

    def _extend_pool(self) -> None:
        while True:
            bound = min(l.mistakes + n for n, l in self.sub.items())
            top = max(self.sub)
            if top >= bound:
                return
            self._ensure(top + 1)

    def counters(self) -> dict[int, int]:
        return {n: l.mistakes for n, l in self.sub.items()}

    def selector(self) -> int:
        self._extend_pool()
        return min(self.sub, key=lambda n: (self.sub[n].mistakes + n, n))

    def predict(self, x: Point) -> int:
        j = self.selector()
        self.selected = j
        return self.sub[j].predict(x)

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        for learner in self.sub.values():
            learner.update(x, y)
        self.history.append((x, y))


class CoverSpec:
    """An ordered, lazily enumerable list of cover hypotheses."""

    def __init__(self, hypotheses: Sequence[Hypothesis] | Iterable[Hypothesis] |
                 Callable[[], Iterable[Hypothesis]]):
        if callable(hypotheses):
            self._iter = iter(hypotheses())
            self._items: list[Hypothesis] = []
        elif isinstance(hypotheses, Sequence):
            self._iter = None
            self._items = list(hypotheses)
        else:
            self._iter = iter(hypotheses)
            self._items = []

    def hypothesis(self, n: int) -> Hypothesis:
        """The n-th cover hypothesis (1-based); IndexError when exhausted."""
        while len(self._items) < n and self._iter is not None:
            try:
                self._items.append(next(self._iter))
            except StopIteration:
                self._iter = None
        if n < 1 or n > len(self._items):
            raise IndexError(f"cover has no hypothesis at index {n}")
        return self._items[n - 1]


class CoverLearner(OnlineLearner):
    """Predicts with the smallest-index cover hypothesis consistent with
    everything seen; hypotheses are eliminated permanently, so the index
    never decreases."""

    def __init__(self, cover: CoverSpec):
        super().__init__()
        self.cover = cover
        self.index = 1
        self.history: list[tuple[Point, int]] = []
        self._advance()

    def _consistent(self, h: Hypothesis) -> bool:
        return all(h(px) == py for px, py in self.history)

    def _advance(self) -> None:
        while True:
            try:
                h = self.cover.hypothesis(self.index)
            except IndexError:
                raise ProtocolError(
                    "every enumerated cover hypothesis eliminated", self.t) from None
            if self._consistent(h):
                self.current = h
                return
            self.index += 1

    def predict(self, x: Point) -> int:
        return self.current(x)

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        self.history.append((x, y))
        if self.current(x) != y:
            self.index += 1
            self._advance()


class NaturalThresholdLearner(OnlineLearner):
    """Learns integer thresholds 1_{x >= n} over the positive integers.

    Predicts 0 until the first mistake at some point x0; the consistent
    thresholds then form a finite set, over which it runs halving
    (majority vote, eliminate the wrong voters). Total mistakes are at
    most 1 + ceil(log2 x0).
    """

    def __init__(self):
        super().__init__()
        self.max_zero = 0          # largest point seen with label 0 before the first 1
        self.alive: Optional[list[int]] = None

    @staticmethod
    def _check_point(x: Point) -> int:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise DomainError(f"expected a positive integer point, got {x!r}")
        return x

    def predict(self, x: Point) -> int:
        x = self._check_point(x)
        if self.alive is None:
            return 0
        votes_one = sum(1 for n in self.alive if x >= n)
        return 1 if 2 * votes_one > len(self.alive) else 0

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        x = self._check_point(x)
        if self.alive is None:
            if y == 0:
                self.max_zero = max(self.max_zero, x)
                return
            # first 1-label: thresholds n <= x survive, n <= max_zero are ruled out
            lo = self.max_zero + 1
            alive = list(range(lo, x + 1))
            if self.max_zero == 0:
                alive = [0] + alive    # the all-ones threshold is still possible
            if not alive:
                raise ProtocolError(
                    f"no threshold is consistent with 1 at {x}", self.t)
            self.alive = alive
            return
        self.alive = [n for n in self.alive if int(x >= n) == y]
        if not self.alive:
            raise ProtocolError("label sequence inconsistent with every threshold", self.t)


class TruncatedThresholdSoa(OnlineLearner):
    """Version-space learner for real thresholds, truncated to the points
    observed so far.

    The consistent thresholds form a window (lo, hi]; at a new point the
    dimension of each side's restriction is floor(log2 of the number of
    behaviors distinguishable on the observed points), so the prediction
    compares observed-point counts in the two sub-windows (ties to 0).
    """

    def __init__(self):
        super().__init__()
        self.seen: list = []
        self.lo = None   # max point labeled 0 (threshold must exceed it)
        self.hi = None   # min point labeled 1 (threshold must not exceed it)

    def predict(self, x: Point) -> int:
        if isinstance(x, str):
            raise DomainError(f"threshold learner needs numeric points, got {x!r}")
        if self.lo is not None and x <= self.lo:
            return 0
        if self.hi is not None and x >= self.hi:
            return 1
        in_zero_side = sum(1 for p in self.seen
                           if x < p and (self.hi is None or p < self.hi))
        in_one_side = sum(1 for p in self.seen
                          if (self.lo is None or p > self.lo) and p < x)
        dim_zero = (in_zero_side + 1).bit_length() - 1
        dim_one = (in_one_side + 1).bit_length() - 1
        return 1 if dim_one > dim_zero else 0

    def _absorb(self, x: Point, y: int, predicted: int) -> None:
        if y == 0:
            if self.hi is not None and x >= self.hi:
                raise ProtocolError("no real threshold fits the labels", self.t)
            self.lo = x if self.lo is None else max(self.lo, x)
        else:
            if self.lo is not None and x <= self.lo:
                raise ProtocolError("no real threshold fits the labels", self.t)
            self.hi = x if self.hi is None else min(self.hi, x)
        self.seen.append(x)
