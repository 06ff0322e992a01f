"""Game loop, mistake/regret accounting, Monte-Carlo orchestration, and
the JSON-config entry points used by the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import fpl, learners, nature
from .hypotheses import (DiscreteMeasure, DomainError, FiniteClass, Hypothesis,
                         Point, family_from_config, format_point,
                         hypothesis_from_config, parse_point)


@dataclass(frozen=True)
class GameRound:
    t: int
    x: Point
    y: int
    predicted: int

    @property
    def mistake(self) -> bool:
        return self.y != self.predicted


@dataclass
class GameTrace:
    """Per-round record of one game; everything else is recomputable from
    the (x, y) columns."""

    rounds: list[GameRound] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rounds)

    @property
    def mistakes(self) -> int:
        return sum(1 for r in self.rounds if r.mistake)

    def points(self) -> list[Point]:
        return [r.x for r in self.rounds]

    def labels(self) -> list[int]:
        return [r.y for r in self.rounds]

    def cumulative_mistakes(self) -> list[int]:
        out, acc = [], 0
        for r in self.rounds:
            acc += r.mistake
            out.append(acc)
        return out


def run_game(learner, strategy: nature.NatureStrategy, horizon: int) -> GameTrace:
    """Exactly `horizon` rounds of observe/predict/reveal. Protocol errors
    surface with their round index; horizon 0 gives an empty trace."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    trace = GameTrace()
    for t in range(1, horizon + 1):
        try:
            x = strategy.next_point(trace)
        except nature.ExhaustionError as exc:
            raise nature.ExhaustionError(f"round {t}: {exc}") from exc
        predicted = learner.predict(x)
        y = strategy.reveal_label(x, predicted, trace)
        learner.update(x, y)
        trace.rounds.append(GameRound(t, x, y, predicted))
    return trace


# ---------------------------------------------------------------------------
# regret
# ---------------------------------------------------------------------------

REAL_THRESHOLDS = "real-thresholds"


def comparison_hypotheses(comparison, points: Sequence[Point]) -> list[Hypothesis]:
    """Materialize a comparison class over the trace's point set.

    Infinite threshold classes reduce to the finitely many behaviors
    distinguishable on the observed points: one cut at each observed value
    plus one above the maximum.
    """
    if isinstance(comparison, FiniteClass):
        return comparison.hypotheses()
    if comparison == REAL_THRESHOLDS:
        numeric = sorted(set(points))
        if not numeric:
            return [Hypothesis("thr-empty", lambda x: 0)]
        if any(isinstance(p, str) for p in numeric):
            raise DomainError("threshold comparison needs numeric points")
        cuts = list(numeric) + [numeric[-1] + 1]
        from .hypotheses import threshold_hypothesis
        return [threshold_hypothesis(c) for c in cuts]
    if isinstance(comparison, Sequence) and all(isinstance(h, Hypothesis) for h in comparison):
        return list(comparison)
    raise DomainError(f"cannot materialize comparison class from {comparison!r}")


def best_rival_mistakes(comparison, trace: GameTrace) -> int:
    hs = comparison_hypotheses(comparison, trace.points())
    return min(sum(1 for r in trace.rounds if h(r.x) != r.y) for h in hs)


def regret(trace: GameTrace, comparison) -> int:
    """Learner mistakes minus the best comparison hypothesis's mistakes."""
    return trace.mistakes - best_rival_mistakes(comparison, trace)


def trace_to_csv(trace: GameTrace, comparison=None) -> str:
    """Frozen column order: t,x,y,yhat,mistake,cum_mistakes,cum_best_rival."""
    lines = ["t,x,y,yhat,mistake,cum_mistakes,cum_best_rival"]
    rival_cum: list[str] = [""] * len(trace.rounds)
    if comparison is not None and trace.rounds:
        hs = comparison_hypotheses(comparison, trace.points())
        per_h = [0] * len(hs)
        for i, r in enumerate(trace.rounds):
            for j, h in enumerate(hs):
                per_h[j] += h(r.x) != r.y
            rival_cum[i] = str(min(per_h))
    acc = 0
    for i, r in enumerate(trace.rounds):
        acc += r.mistake
        lines.append(f"{r.t},{format_point(r.x)},{r.y},{r.predicted},"
                     f"{int(r.mistake)},{acc},{rival_cum[i]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Monte-Carlo harness
# ---------------------------------------------------------------------------

@dataclass
class TrialStats:
    values: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def se(self) -> float:
        return float(np.std(self.values, ddof=1) / math.sqrt(len(self.values)))


@dataclass
class RegretCurve:
    horizons: list[int]
    stats: list[TrialStats]
    bounds: Optional[list[float]] = None

    def rows(self) -> list[dict]:
        out = []
        for i, T in enumerate(self.horizons):
            row = {"T": T, "mean": self.stats[i].mean, "se": self.stats[i].se,
                   "trials": self.stats[i].trials}
            if self.bounds is not None:
                row["bound"] = self.bounds[i]
            out.append(row)
        return out


def trial_seeds(master_seed: int, trials: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(master_seed).generate_state(trials)]


def monte_carlo(trial_fn: Callable[[int], float], trials: int,
                master_seed: int = 0) -> TrialStats:
    """Independent seeded trials of a scalar experiment."""
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    values = np.array([trial_fn(s) for s in trial_seeds(master_seed, trials)],
                      dtype=float)
    return TrialStats(values)


def regret_curve(make_learner: Callable[[int], object],
                 make_nature: Callable[[int], nature.NatureStrategy],
                 horizons: Sequence[int], trials: int, master_seed: int,
                 comparison, bound_fn: Optional[Callable[[int], float]] = None
                 ) -> RegretCurve:
    """Mean regret with standard errors across seeded trials, one row per
    horizon, with an optional analytic bound column."""
    stats = []
    for T in horizons:
        def trial(seed: int, T=T) -> float:
            half = np.random.SeedSequence(seed).generate_state(2)
            trace = run_game(make_learner(int(half[0])), make_nature(int(half[1])), T)
            return float(regret(trace, comparison))
        stats.append(monte_carlo(trial, trials, master_seed))
    bounds = [float(bound_fn(T)) for T in horizons] if bound_fn else None
    return RegretCurve(list(horizons), stats, bounds)


# ---------------------------------------------------------------------------
# JSON-config factories
# ---------------------------------------------------------------------------

def _cover_from_config(spec) -> learners.CoverSpec:
    return learners.CoverSpec([hypothesis_from_config(h) for h in spec])


def make_learner(spec: dict, seed: Optional[int] = None):
    """Build a learner from its textual spec (see the README table)."""
    kind = spec.get("learner")
    if kind == "soa":
        return learners.SoaLearner(FiniteClass.from_config(spec["class"]),
                                   always_restrict=spec.get("always_restrict", False),
                                   on_empty=spec.get("on_empty", "error"))
    if kind == "expert":
        return learners.ExpertLearner(FiniteClass.from_config(spec["class"]),
                                      tuple(spec["key"]),
                                      on_empty=spec.get("on_empty", "error"))
    if kind == "aggregator":
        return learners.AggregatorLearner(family_from_config(spec["family"]))
    if kind == "cover":
        return learners.CoverLearner(_cover_from_config(spec["cover"]))
    if kind == "natural-threshold":
        return learners.NaturalThresholdLearner()
    if kind == "truncated-threshold-soa":
        return learners.TruncatedThresholdSoa()
    if kind == "constant":
        return learners.ConstantLearner(spec.get("value", 0))
    if kind == "fpl":
        experts = [learners.FollowHypothesisLearner(hypothesis_from_config(h))
                   for h in spec["experts"]]
        return fpl.FplLearner(experts, [float(k) for k in spec["k"]],
                              seed=seed, redraw=spec.get("redraw", "per-round"))
    if kind == "agnostic-fpl":
        return fpl.AgnosticFpl(family_from_config(spec["family"]),
                               int(spec.get("components", 1)),
                               seed=seed, redraw=spec.get("redraw", "per-round"),
                               cap_dim=spec.get("cap_d", 2),
                               cap_rounds=spec.get("cap_T"))
    raise DomainError(f"unknown learner spec: {kind!r}")


def make_nature(spec: dict, seed: Optional[int] = None,
                learner_spec: Optional[dict] = None) -> nature.NatureStrategy:
    """Build a Nature strategy from its textual spec."""
    kind = spec.get("nature")
    if kind == "scripted":
        xs = [parse_point(p) for p in spec["x"]]
        if "target" in spec:
            return nature.RealizableScripted(hypothesis_from_config(spec["target"]),
                                             xs, cycle=spec.get("cycle", False))
        return nature.AgnosticScripted(xs, spec["y"])
    if kind == "iid":
        return nature.StochasticIid(hypothesis_from_config(spec["target"]),
                                    DiscreteMeasure.from_config(spec["measure"]),
                                    seed=seed)
    if kind == "coin-flip":
        return nature.CoinFlip(seed=seed, point=parse_point(spec.get("point", 0)))
    if kind == "window-halving":
        return nature.WindowHalving(depth=int(spec.get("depth", 64)))
    if kind == "tree-adversary":
        cls = FiniteClass.from_config(spec["class"])
        mode = spec.get("mode", "online")
        if mode == "online":
            return nature.TreeAdversary(cls)
        if mode == "committed":
            if learner_spec is None:
                raise DomainError("committed tree adversary needs the learner spec")
            return nature.commit_adversary(cls, lambda: make_learner(learner_spec))
        raise DomainError(f"unknown tree-adversary mode: {mode!r}")
    raise DomainError(f"unknown nature spec: {kind!r}")


def play_config(learner_spec: dict, nature_spec: dict, horizon: int,
                seed: int = 0):
    """Build both sides from specs with a split seed and run one game."""
    half = np.random.SeedSequence(seed).generate_state(2)
    learner = make_learner(learner_spec, seed=int(half[0]))
    strategy = make_nature(nature_spec, seed=int(half[1]), learner_spec=learner_spec)
    return run_game(learner, strategy, horizon), learner


def comparison_from_config(spec):
    if spec == REAL_THRESHOLDS:
        return REAL_THRESHOLDS
    if isinstance(spec, dict) and "domain" in spec:
        return FiniteClass.from_config(spec)
    if isinstance(spec, list):
        return [hypothesis_from_config(h) for h in spec]
    raise DomainError(f"unknown comparison spec: {spec!r}")


def regret_experiment_from_config(config: dict) -> RegretCurve:
    """Config keys: learner, nature, comparison, Ts (or T), trials,
    master_seed, optional bound {"kind": "fpl", "k": ...}."""
    horizons = config.get("Ts") or [config["T"]]
    trials = int(config.get("trials", 100))
    master_seed = int(config.get("master_seed", 0))
    learner_spec, nature_spec = config["learner"], config["nature"]
    comparison = comparison_from_config(config["comparison"])

    bound_fn = None
    bound = config.get("bound")
    if bound:
        if bound["kind"] == "fpl":
            k = float(bound["k"])
            bound_fn = lambda T: (k + 2.0) * math.sqrt(T)
        elif bound["kind"] == "hierarchical":
            d, n = int(bound["dim"]), int(bound["n"])
            bound_fn = lambda T: (d + (d + 3.0) * math.log(T) * math.sqrt(T)
                                  + (2.0 * math.log(n) + 4.0) * math.sqrt(T))
        else:
            raise DomainError(f"unknown bound kind: {bound['kind']!r}")

    return regret_curve(
        lambda s: make_learner(learner_spec, seed=s),
        lambda s: make_nature(nature_spec, seed=s, learner_spec=learner_spec),
        horizons, trials, master_seed, comparison, bound_fn)
