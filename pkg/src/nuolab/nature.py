"""Nature's side of the observe/predict/reveal protocol: realizable
streams (scripted and iid), the shattered-tree forcing adversary, the
window-halving real-threshold adversary, and the fair-coin label source.

Strategies are single-owner per game. Realizable variants satisfy
y = h*(x) on every round; agnostic variants see the public transcript
(including past predictions) but never the learner's random bits.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .hypotheses import DiscreteMeasure, FiniteClass, Hypothesis, Point
from .littlestone import ldim, shattered_tree_witness


class ExhaustionError(RuntimeError):
    """A finite strategy ran out of points (normal end of an experiment)."""


class NatureStrategy:
    def next_point(self, trace=None) -> Point:
        raise NotImplementedError

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        raise NotImplementedError


class RealizableScripted(NatureStrategy):
    """A fixed ground-truth hypothesis and a fixed point sequence; labels
    are always h*(x). With cycle=True the point sequence repeats forever."""

    def __init__(self, hypothesis: Hypothesis, points: Sequence[Point], *,
                 cycle: bool = False):
        self.hypothesis = hypothesis
        self.points = list(points)
        self.cycle = cycle
        self.served = 0

    def next_point(self, trace=None) -> Point:
        i = self.served
        if i >= len(self.points):
            if not self.cycle or not self.points:
                raise ExhaustionError(f"scripted stream exhausted after {i} points")
            i %= len(self.points)
        self.served += 1
        return self.points[i]

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        return self.hypothesis(x)


class AgnosticScripted(NatureStrategy):
    """Fixed point and label sequences with no realizability promise."""

    def __init__(self, points: Sequence[Point], labels: Sequence[int]):
        if len(points) != len(labels):
            raise ValueError("points and labels differ in length")
        self.points = list(points)
        self.labels = [int(v) for v in labels]
        self.served = 0

    def next_point(self, trace=None) -> Point:
        if self.served >= len(self.points):
            raise ExhaustionError(f"scripted stream exhausted after {self.served} points")
        x = self.points[self.served]
        self.served += 1
        return x

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        return self.labels[self.served - 1]


class StochasticIid(NatureStrategy):
    """Points drawn iid from a discrete measure; labels from a fixed
    ground-truth hypothesis."""

    def __init__(self, hypothesis: Hypothesis, measure: DiscreteMeasure,
                 seed: Optional[int] = None):
        self.hypothesis = hypothesis
        self.measure = measure
        self.rng = random.Random(seed)

    def next_point(self, trace=None) -> Point:
        return self.measure.sample(self.rng)

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        return self.hypothesis(x)


class CoinFlip(NatureStrategy):
    """A single fixed point; labels are independent fair bits from a
    dedicated stream, oblivious to the learner."""

    def __init__(self, seed: Optional[int] = None, point: Point = 0):
        self.point = point
        self.rng = random.Random(seed)

    def next_point(self, trace=None) -> Point:
        return self.point

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        return self.rng.getrandbits(1)


class WindowHalving(NatureStrategy):
    """Real-threshold forcing adversary on [0, 1].

    Keeps a feasible window for the threshold, emits its midpoint, answers
    the opposite of the prediction, then keeps the consistent half and
    shrinks it to its centered half before the next midpoint. The quarter
    gaps left on both sides keep every emitted point strictly outside all
    later windows, so no branch can converge onto a point already shown.
    All arithmetic is exact dyadic rationals.
    """

    def __init__(self, depth: int = 64):
        if depth < 1:
            raise ValueError("depth cap must be >= 1")
        self.depth = depth
        self.lo = Fraction(0)
        self.hi = Fraction(1)
        self.emitted: list[tuple[Fraction, int]] = []

    def next_point(self, trace=None) -> Fraction:
        if len(self.emitted) >= self.depth:
            raise ExhaustionError(f"window-halving depth cap {self.depth} reached")
        return (self.lo + self.hi) / 2

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        y = 1 - predicted
        mid = (self.lo + self.hi) / 2
        if y == 1:
            lo, hi = self.lo, mid      # threshold <= mid
        else:
            lo, hi = mid, self.hi      # threshold > mid
        quarter = (hi - lo) / 4
        self.lo, self.hi = lo + quarter, hi - quarter
        assert self.lo < self.hi
        self.emitted.append((x, y))
        return y

    def realizing_threshold(self) -> Fraction:
        """A rational threshold consistent with every emitted pair; raises
        if the history is not realizable (it always is, by construction)."""
        c = (self.lo + self.hi) / 2
        for p, y in self.emitted:
            if int(p >= c) != y:
                raise AssertionError(f"window lost realizability at ({p}, {y})")
        return c


class TreeAdversary(NatureStrategy):
    """Forcing adversary descending a maximal shattered tree: it answers
    the opposite of every prediction for ldim rounds (always consistent,
    by the shattering), then fixes the realizing hypothesis of the forced
    branch and plays it on the domain points forever."""

    def __init__(self, cls: FiniteClass):
        d = ldim(cls)
        if d < 1:
            raise ValueError("class shatters nothing; there is no branch to force")
        self.cls = cls
        self.depth = d
        self.witness = shattered_tree_witness(cls, d)
        self.node = 1
        self.path: list[int] = []
        self.forced: list[Point] = []
        self.committed: Optional[Hypothesis] = None
        self._served_after = 0

    def next_point(self, trace=None) -> Point:
        if self.committed is None:
            return self.witness.points[self.node - 1]
        x = self.cls.domain[self._served_after % len(self.cls.domain)]
        self._served_after += 1
        return x

    def reveal_label(self, x: Point, predicted: int, trace=None) -> int:
        if self.committed is not None:
            return self.committed(x)
        y = 1 - predicted
        self.path.append(y)
        self.forced.append(x)
        self.node = 2 * self.node + y
        if len(self.path) == self.depth:
            label = self.witness.realizers[tuple(self.path)]
            h = self.cls.hypothesis(label)
            for p, yy in zip(self.forced, self.path):
                if h(p) != yy:
                    raise AssertionError("realizer inconsistent with the forced branch")
            self.committed = h
        return y


def commit_adversary(cls: FiniteClass, learner_factory: Callable[[], "object"]
                     ) -> RealizableScripted:
    """Turn the forcing adversary into a fixed-in-advance realizable script
    for one deterministic learner.

    Simulates a private copy of the learner down the shattered tree,
    records the branch on which every prediction is wrong, and returns the
    branch together with its realizing hypothesis as a scripted strategy.
    Replaying the script against the same learner reproduces the same
    transcript, hence at least ldim mistakes.
    """
    learner = learner_factory()
    if not getattr(learner, "deterministic", False):
        raise ValueError("committed adversary requires a deterministic learner")
    adversary = TreeAdversary(cls)
    xs: list[Point] = []
    ys: list[int] = []
    for _ in range(adversary.depth):
        x = adversary.next_point()
        predicted = learner.predict(x)
        y = adversary.reveal_label(x, predicted)
        learner.update(x, y)
        xs.append(x)
        ys.append(y)
    h = adversary.committed
    for x, y in zip(xs, ys):
        if h(x) != y:
            raise AssertionError("committed hypothesis inconsistent with its script")
    return RealizableScripted(h, xs, cycle=True)
