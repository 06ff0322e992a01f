"""Bound-verification suite.

Each check exercises one guarantee at its stated tolerance and returns a
verdict (never raises on a failed bound): exact combinatorial checks get
zero tolerance, expected-regret checks compare the Monte-Carlo mean plus
or minus three standard errors against the analytic expression.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import fpl, learners, nature, runner
from .hypotheses import (DiscreteMeasure, ExplicitListFamily, FiniteClass,
                         FiniteSupportFamily, support_hypothesis)
from .littlestone import VersionSpace, ldim, minimax_mistakes, soa_prediction


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass
class ExperimentReport:
    """A suite run: config echo, per-check verdicts, overall outcome."""

    suite: str
    seed: int
    results: list

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        passed = sum(r.passed for r in self.results)
        return ([r.line() for r in self.results]
                + [f"{passed}/{len(self.results)} checks passed"])


# ---------------------------------------------------------------------------
# class corpora
# ---------------------------------------------------------------------------

def small_class_corpus() -> list[FiniteClass]:
    """Every duplicate-free class over 1, 2 and 3 named points."""
    out = []
    for m in (1, 2, 3):
        points = ("a", "b", "c")[:m]
        all_rows = list(itertools.product((0, 1), repeat=m))
        for mask in range(1, 2 ** len(all_rows)):
            rows = [all_rows[i] for i in range(len(all_rows)) if mask >> i & 1]
            out.append(FiniteClass(points, rows))
    return out


def random_class_corpus(count: int, seed: int) -> list[FiniteClass]:
    """Random duplicate-free classes over 4 and 5 points."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        m = 4 + (i % 2)
        points = tuple(f"p{j}" for j in range(m))
        all_rows = list(itertools.product((0, 1), repeat=m))
        n_rows = rng.randint(2, min(14, len(all_rows)))
        out.append(FiniteClass(points, rng.sample(all_rows, n_rows)))
    return out


def max_adaptive_soa_mistakes(cls: FiniteClass) -> int:
    """Exhaustive enumeration of adversary strategies against the
    mistake-update version-space learner: the adversary picks any point
    and any label consistent with some hypothesis given the full history;
    returns the worst-case total mistakes."""
    rows = cls.rows
    ncols = len(cls.domain)
    memo: dict[tuple[frozenset, frozenset], int] = {}
    pred_cache: dict[tuple[frozenset, int], int] = {}

    def pred(soa_ids: frozenset, col: int) -> int:
        key = (soa_ids, col)
        p = pred_cache.get(key)
        if p is None:
            p = soa_prediction(VersionSpace(cls, soa_ids), cls.domain[col])
            pred_cache[key] = p
        return p

    def rec(full_ids: frozenset, soa_ids: frozenset) -> int:
        key = (full_ids, soa_ids)
        cached = memo.get(key)
        if cached is not None:
            return cached
        best = 0
        for col in range(ncols):
            for y in (0, 1):
                nf = frozenset(i for i in full_ids if rows[i][col] == y)
                if not nf:
                    continue
                mistake = pred(soa_ids, col) != y
                if mistake:
                    ns = frozenset(i for i in soa_ids if rows[i][col] == y)
                else:
                    ns = soa_ids
                    if nf == full_ids:
                        continue    # nothing changed and nothing gained
                cand = int(mistake) + rec(nf, ns)
                if cand > best:
                    best = cand
        memo[key] = best
        return best

    full = frozenset(range(len(cls)))
    return rec(full, full)


# ---------------------------------------------------------------------------
# exact checks
# ---------------------------------------------------------------------------

def check_ldim_minimax_equality(seed: int = 0, random_count: int = 50,
                                ldim_fn: Optional[Callable] = None) -> CheckResult:
    """Game value of the adaptive mistake game equals the dimension, on an
    exhaustive small corpus plus random classes. Zero tolerance."""
    dim = ldim_fn or ldim
    corpus = small_class_corpus() + random_class_corpus(random_count, seed)
    for cls in corpus:
        d, g = dim(cls), minimax_mistakes(cls)
        if d != g:
            return CheckResult(
                "ldim-minimax-equality", False,
                f"dimension {d} != game value {g} on {cls!r}")
    return CheckResult("ldim-minimax-equality", True,
                       f"{len(corpus)} classes, game value == dimension on all")


def check_soa_mistake_bound(seed: int = 0, random_count: int = 50) -> CheckResult:
    """The version-space learner never exceeds the class dimension in
    mistakes: against its committed forcing script, and against exhaustive
    enumeration of adaptive adversaries. Zero tolerance."""
    corpus = small_class_corpus() + random_class_corpus(random_count, seed)
    for cls in corpus:
        d = ldim(cls)
        worst = max_adaptive_soa_mistakes(cls)
        if worst > d:
            return CheckResult(
                "soa-mistake-bound", False,
                f"exhaustive adversary forces {worst} > dimension {d} on {cls!r}")
        if d >= 1:
            script = nature.commit_adversary(cls, lambda c=cls: learners.SoaLearner(c))
            trace = runner.run_game(learners.SoaLearner(cls), script,
                                    d + len(cls.domain))
            if trace.mistakes > d:
                return CheckResult(
                    "soa-mistake-bound", False,
                    f"committed script forces {trace.mistakes} > {d} on {cls!r}")
    return CheckResult("soa-mistake-bound", True,
                       f"{len(corpus)} classes, mistakes <= dimension on all")


def check_aggregator_square_bound(horizon: int = 200) -> CheckResult:
    """Index-penalized selection over the bounded-support union on twelve
    points: with the truth in component k, total mistakes stay within
    (d_k + k)^2 on adversarial scripted streams. Zero tolerance."""
    domain = tuple(range(1, 13))
    family = FiniteSupportFamily(domain)
    rng = random.Random(7)
    for k in (1, 2, 3):
        target = support_hypothesis(domain[:k])
        d_k = family.component(k).dim
        bound = (d_k + k) ** 2
        streams = [
            [domain[i % len(domain)] for i in range(horizon)],
            ([*domain[:k]] * 10 + [domain[i % len(domain)] for i in range(horizon)])[:horizon],
            [rng.choice(domain) for _ in range(horizon)],
            [rng.choice(domain) for _ in range(horizon)],
        ]
        for xs in streams:
            agg = learners.AggregatorLearner(family)
            trace = runner.run_game(agg, nature.RealizableScripted(target, xs), horizon)
            if trace.mistakes > bound:
                return CheckResult(
                    "aggregator-square-bound", False,
                    f"k={k}: {trace.mistakes} mistakes > ({d_k}+{k})^2 = {bound}")
    return CheckResult("aggregator-square-bound", True,
                       f"mistakes <= (d_k+k)^2 for k in (1,2,3), T={horizon}")


def check_cover_index_bound(horizon: int = 80) -> CheckResult:
    """Smallest-consistent-index prediction over an ordered cover: with the
    truth covered at index m, at most m mistakes on iid streams. Zero
    tolerance."""
    support = list(range(1, 21))
    measure = DiscreteMeasure.geometric(support)
    cover = [support_hypothesis([j], hid=j) for j in support]
    for m in (1, 5, 10):
        targets = [cover[m - 1],                      # exactly the m-th entry
                   support_hypothesis([m, 21])]       # differs only off-support
        for target in targets:
            for seed in (0, 1, 2):
                learner = learners.CoverLearner(learners.CoverSpec(cover))
                trace = runner.run_game(
                    learner, nature.StochasticIid(target, measure, seed), horizon)
                if trace.mistakes > m or learner.index > m:
                    return CheckResult(
                        "cover-index-bound", False,
                        f"m={m}, seed={seed}: {trace.mistakes} mistakes, "
                        f"final index {learner.index}")
    return CheckResult("cover-index-bound", True,
                       f"mistakes <= m for m in (1,5,10), T={horizon}")


def _keys_up_to(horizon: int, max_len: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for length in range(1, max_len + 1):
        out.extend(itertools.combinations(range(1, horizon + 1), length))
    return out


def check_expert_key_bound() -> CheckResult:
    """For every label pattern there is a keyed expert whose mistakes stay
    within key length + best hypothesis mistakes. Exhaustive over label
    patterns at T=8 (cyclic points) and over full point/label product at
    T=4, on classes of dimension 1 and 2. Zero tolerance."""
    classes = [
        FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4)),
        FiniteClass((1, 2, 3), [[0, 0, 0], [1, 1, 1]]),
    ]
    jobs = []
    for cls in classes:
        T = 8
        xs = tuple((1, 2, 3)[(t - 1) % 3] for t in range(1, T + 1))
        for ys in itertools.product((0, 1), repeat=T):
            jobs.append((cls, xs, ys))
        T = 4
        for xs in itertools.product((1, 2, 3), repeat=T):
            for ys in itertools.product((0, 1), repeat=T):
                jobs.append((cls, xs, ys))

    key_cache: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for cls, xs, ys in jobs:
        d = ldim(cls)
        keys = key_cache.setdefault((len(xs), d), _keys_up_to(len(xs), d))
        rival = min(sum(int(row[cls.point_index(x)] != y) for x, y in zip(xs, ys))
                    for row in cls.rows)
        best = None
        for key in keys:
            expert = learners.ExpertLearner(cls, key)
            try:
                for x, y in zip(xs, ys):
                    expert.update(x, y)
            except learners.ProtocolError:
                continue
            slack = expert.mistakes - len(key)
            if best is None or slack < best:
                best = slack
            if best <= rival:
                break
        if best is None or best > rival:
            return CheckResult(
                "expert-key-cover", False,
                f"no key within {rival} + L mistakes for ys={ys} xs={xs} on {cls!r}")
    return CheckResult("expert-key-cover", True,
                       f"{len(jobs)} point/label patterns, witness key found for all")


def check_complexity_mass(terms: int = 10_000) -> CheckResult:
    """Partial complexity masses stay under their analytic ceilings:
    1/e for the component scheme, 0.83 for the keyed-pool overcount."""
    meta = fpl.meta_mass_partial(terms)
    if meta > 1.0 / math.e:
        return CheckResult("complexity-mass", False,
                           f"component mass {meta:.4f} > 1/e over {terms} terms")
    for dim in (0, 1, 2, 3):
        pool = fpl.pool_mass_bound_partial(dim, terms)
        if pool > 0.83:
            return CheckResult(
                "complexity-mass", False,
                f"pool mass {pool:.4f} > 0.83 for dim {dim} over {terms} terms")
    return CheckResult(
        "complexity-mass", True,
        f"component {meta:.4f} <= 1/e, pool <= 0.83 for dims 0-3, {terms} terms")


def check_window_halving(rounds: int = 40) -> CheckResult:
    """The dyadic window adversary forces a mistake every round while every
    prefix stays realizable by a real threshold (exact rational check)."""
    makers = [learners.TruncatedThresholdSoa,
              lambda: learners.ConstantLearner(0),
              lambda: learners.ConstantLearner(1)]
    for make in makers:
        learner = make()
        adversary = nature.WindowHalving(depth=max(64, rounds))
        for t in range(1, rounds + 1):
            x = adversary.next_point()
            predicted = learner.predict(x)
            y = adversary.reveal_label(x, predicted)
            learner.update(x, y)
            if predicted == y:
                return CheckResult(
                    "window-halving-forcing", False,
                    f"{type(learner).__name__} predicted correctly at round {t}")
            try:
                adversary.realizing_threshold()
            except AssertionError as exc:
                return CheckResult("window-halving-forcing", False, str(exc))
    return CheckResult("window-halving-forcing", True,
                       f"3 learners, {rounds} forced mistakes each, all prefixes realizable")


# ---------------------------------------------------------------------------
# Monte-Carlo checks
# ---------------------------------------------------------------------------

class _ParityExpert(learners.OnlineLearner):
    """Predicts the round's parity (phase 0: even rounds are 1)."""

    def __init__(self, phase: int):
        super().__init__()
        self.phase = phase

    def predict(self, x) -> int:
        return int(self.t % 2 == self.phase)


class _LastLabelExpert(learners.OnlineLearner):
    """Predicts the previously revealed label (0 on the first round)."""

    def __init__(self):
        super().__init__()
        self.last = 0

    def predict(self, x) -> int:
        return self.last

    def _absorb(self, x, y, predicted) -> None:
        self.last = y


def _fpl_trial(expert_makers, ks, labels, seed, redraw="per-round"):
    learner = fpl.FplLearner([m() for m in expert_makers], ks, seed=seed,
                             redraw=redraw)
    for y in labels:
        learner.update(0, y)
    return learner


def check_fpl_regret_bound(trials: int = 2000, horizon: int = 400,
                           master_seed: int = 2026) -> CheckResult:
    """Perturbed-leader regret against each fixed expert stays within
    (k_i + 2) sqrt(T) in expectation: Monte-Carlo mean + 3 SE vs the bound,
    on an adversarial alternating script and on fair-coin scripts."""
    configs = []
    two = [lambda: learners.ConstantLearner(0), lambda: learners.ConstantLearner(1)]
    alternating = [t % 2 for t in range(1, horizon + 1)]
    configs.append(("two-expert-alternating", two, [1.0, 1.0], None, alternating))
    configs.append(("two-expert-coin", two, [1.0, 1.0], "coin", None))
    five = two + [lambda: _ParityExpert(0), lambda: _ParityExpert(1),
                  _LastLabelExpert]
    ks5 = [1.0 + math.log(i) for i in range(1, 6)]
    configs.append(("five-expert-coin", five, ks5, "coin", None))

    details = []
    for offset, (name, makers, ks, label_mode, script) in enumerate(configs):
        seeds = runner.trial_seeds(master_seed + offset, trials)
        regrets = np.empty((trials, len(ks)))
        for i, seed in enumerate(seeds):
            half = np.random.SeedSequence(seed).generate_state(2)
            if label_mode == "coin":
                lab_rng = random.Random(int(half[1]))
                labels = [lab_rng.getrandbits(1) for _ in range(horizon)]
            else:
                labels = script
            learner = _fpl_trial(makers, ks, labels, int(half[0]))
            regrets[i] = learner.mistakes - np.asarray(learner.losses)
        mean = regrets.mean(axis=0)
        se = regrets.std(axis=0, ddof=1) / math.sqrt(trials)
        for j, k in enumerate(ks):
            bound = (k + 2.0) * math.sqrt(horizon)
            if mean[j] + 3 * se[j] > bound:
                return CheckResult(
                    "fpl-regret-bound", False,
                    f"{name}: regret vs expert {j + 1} = {mean[j]:.2f} "
                    f"+ 3*{se[j]:.2f} > {bound:.2f}")
        details.append(f"{name} worst margin "
                       f"{min((ks[j] + 2) * math.sqrt(horizon) - mean[j] - 3 * se[j] for j in range(len(ks))):.1f}")
    return CheckResult("fpl-regret-bound", True,
                       f"T={horizon}, {trials} trials: " + "; ".join(details))


def _hierarchical_family() -> ExplicitListFamily:
    constants = FiniteClass((1, 2, 3, 4), [[0, 0, 0, 0], [1, 1, 1, 1]])
    thresholds = FiniteClass.thresholds((1, 2, 3, 4), (1, 2, 3, 4, 5))
    return ExplicitListFamily([constants, thresholds])


def hierarchical_bound(dim: int, n: int, horizon: int) -> float:
    return (dim + (dim + 3.0) * math.log(horizon) * math.sqrt(horizon)
            + (2.0 * math.log(n) + 4.0) * math.sqrt(horizon))


def check_hierarchical_regret_bound(trials: int = 500, horizons=(100, 200),
                                    master_seed: int = 31) -> CheckResult:
    """The two-level perturbed-leader learner keeps expected regret against
    every hypothesis of component n within the explicit per-component
    expression; Monte-Carlo mean + 3 SE vs that bound."""
    family = _hierarchical_family()
    dims = [family.component(n).dim for n in (1, 2)]
    details = []
    for horizon in horizons:
        xs = [(1, 2, 3, 4)[(t - 1) % 4] for t in range(1, horizon + 1)]
        for label_mode in ("alternating", "coin"):
            regrets = np.empty((trials, 2))
            for i, seed in enumerate(runner.trial_seeds(master_seed + horizon, trials)):
                half = np.random.SeedSequence(seed).generate_state(2)
                if label_mode == "coin":
                    rng = random.Random(int(half[1]))
                    ys = [rng.getrandbits(1) for _ in range(horizon)]
                else:
                    ys = [t % 2 for t in range(1, horizon + 1)]
                learner = fpl.AgnosticFpl(family, 2, seed=int(half[0]))
                trace = runner.run_game(learner,
                                        nature.AgnosticScripted(xs, ys), horizon)
                for n in (1, 2):
                    regrets[i, n - 1] = runner.regret(trace, family.component(n).cls)
            mean = regrets.mean(axis=0)
            se = regrets.std(axis=0, ddof=1) / math.sqrt(trials)
            for n in (1, 2):
                bound = hierarchical_bound(dims[n - 1], n, horizon)
                if mean[n - 1] + 3 * se[n - 1] > bound:
                    return CheckResult(
                        "hierarchical-regret-bound", False,
                        f"T={horizon} {label_mode}: regret vs component {n} = "
                        f"{mean[n - 1]:.2f} + 3*{se[n - 1]:.2f} > {bound:.2f}")
            details.append(f"T={horizon} {label_mode}: "
                           + ", ".join(f"n={n}: {mean[n - 1]:.1f} vs "
                                       f"{hierarchical_bound(dims[n - 1], n, horizon):.0f}"
                                       for n in (1, 2)))
    return CheckResult("hierarchical-regret-bound", True,
                       f"{trials} trials; " + "; ".join(details))


def check_coinflip_regret_floor(trials: int = 2000, horizons=(100, 400),
                                master_seed: int = 99) -> CheckResult:
    """Fair-coin labels on a single point force expected regret of at least
    3 sqrt(T) / 64 on every learner; Monte-Carlo mean - 3 SE vs the floor,
    for the hierarchical learner and two fixed baselines."""
    cls = FiniteClass((0,), [[0], [1]])
    family = ExplicitListFamily([cls])
    makers = {
        "agnostic": lambda s: fpl.AgnosticFpl(family, 1, seed=s, cap_dim=2),
        "root-expert": lambda s: learners.ExpertLearner(cls, ()),
        "constant": lambda s: learners.ConstantLearner(0),
    }
    details = []
    for horizon in horizons:
        floor = 3.0 * math.sqrt(horizon) / 64.0
        for name, make in makers.items():
            def trial(seed: int) -> float:
                half = np.random.SeedSequence(seed).generate_state(2)
                trace = runner.run_game(make(int(half[0])),
                                        nature.CoinFlip(int(half[1])), horizon)
                return float(runner.regret(trace, cls))
            stats = runner.monte_carlo(trial, trials, master_seed + horizon)
            if stats.mean - 3 * stats.se < floor:
                return CheckResult(
                    "coinflip-regret-floor", False,
                    f"T={horizon} {name}: {stats.mean:.2f} - 3*{stats.se:.2f} "
                    f"< floor {floor:.3f}")
            details.append(f"T={horizon} {name}: {stats.mean:.2f} >= {floor:.2f}")
    return CheckResult("coinflip-regret-floor", True,
                       f"{trials} trials; " + "; ".join(details))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def default_suite(seed: int = 0) -> list[CheckResult]:
    """All acceptance checks at their stated scale."""
    return [
        check_ldim_minimax_equality(seed=seed),
        check_soa_mistake_bound(seed=seed),
        check_aggregator_square_bound(),
        check_cover_index_bound(),
        check_expert_key_bound(),
        check_fpl_regret_bound(),
        check_hierarchical_regret_bound(),
        check_coinflip_regret_floor(),
        check_complexity_mass(),
        check_window_halving(),
    ]


def full_suite(seed: int = 0) -> list[CheckResult]:
    """Larger corpora and trial counts; slower."""
    return [
        check_ldim_minimax_equality(seed=seed, random_count=120),
        check_soa_mistake_bound(seed=seed, random_count=100),
        check_aggregator_square_bound(horizon=300),
        check_cover_index_bound(horizon=150),
        check_expert_key_bound(),
        check_fpl_regret_bound(trials=3000),
        check_hierarchical_regret_bound(trials=800),
        check_coinflip_regret_floor(trials=3000),
        check_complexity_mass(terms=100_000),
        check_window_halving(rounds=48),
    ]


def run_report(suite: str = "default", seed: int = 0) -> ExperimentReport:
    results = (full_suite if suite == "full" else default_suite)(seed=seed)
    return ExperimentReport(suite, seed, results)
