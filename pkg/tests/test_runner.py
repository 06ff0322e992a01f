import math
from fractions import Fraction

import numpy as np
import pytest

from nuolab import learners, nature, runner
from nuolab.hypotheses import (DomainError, FiniteClass, FiniteSupportFamily,
                               support_hypothesis, threshold_hypothesis)
from nuolab.runner import (best_rival_mistakes, comparison_hypotheses,
                           make_learner, make_nature, monte_carlo, play_config,
                           regret, regret_curve, run_game, trace_to_csv,
                           trial_seeds)

TWO_CLASS = FiniteClass((0,), [[0], [1]])


class TestRunGame:
    def test_exact_trace(self):
        strategy = nature.AgnosticScripted([0, 0, 0], [1, 0, 1])
        trace = run_game(learners.ConstantLearner(0), strategy, 3)
        assert [(r.t, r.x, r.y, r.predicted) for r in trace.rounds] == \
            [(1, 0, 1, 0), (2, 0, 0, 0), (3, 0, 1, 0)]
        assert trace.mistakes == 2

    def test_zero_horizon(self):
        strategy = nature.AgnosticScripted([], [])
        trace = run_game(learners.ConstantLearner(0), strategy, 0)
        assert len(trace) == 0 and trace.mistakes == 0

    def test_exhaustion_carries_round(self):
        strategy = nature.AgnosticScripted([0], [1])
        with pytest.raises(nature.ExhaustionError, match="round 2"):
            run_game(learners.ConstantLearner(0), strategy, 2)

    def test_protocol_error_carries_round(self):
        strategy = nature.AgnosticScripted([0, 0], [1, 0])
        learner = learners.SoaLearner(TWO_CLASS)
        with pytest.raises(learners.ProtocolError, match="round 2"):
            run_game(learner, strategy, 2)

    def test_trace_self_consistency(self):
        strategy = nature.CoinFlip(seed=5)
        trace = run_game(learners.ConstantLearner(0), strategy, 50)
        assert trace.cumulative_mistakes()[-1] == trace.mistakes
        assert trace.mistakes == sum(r.y != r.predicted for r in trace.rounds)


class TestRegret:
    def test_perfect_realizable_learner(self):
        target = threshold_hypothesis(2)
        strategy = nature.RealizableScripted(target, [1, 2, 3], cycle=True)
        learner = learners.FollowHypothesisLearner(target)
        trace = run_game(learner, strategy, 9)
        cls = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        assert regret(trace, cls) == 0

    def test_hand_counted_example(self):
        # y = (1,0,1,0) on one point, all-zero predictions: 2 vs best 2
        strategy = nature.AgnosticScripted([0] * 4, [1, 0, 1, 0])
        trace = run_game(learners.ConstantLearner(0), strategy, 4)
        assert trace.mistakes == 2
        assert best_rival_mistakes(TWO_CLASS, trace) == 2
        assert regret(trace, TWO_CLASS) == 0

    def test_threshold_behaviors_materialization(self):
        points = [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]
        hs = comparison_hypotheses(runner.REAL_THRESHOLDS, points)
        patterns = {tuple(h(p) for p in points) for h in hs}
        assert patterns == {(1, 1, 1), (1, 0, 1), (0, 0, 1), (0, 0, 0)}

    def test_unmaterializable_comparison(self):
        strategy = nature.AgnosticScripted(["a"], [1])
        trace = run_game(learners.ConstantLearner(0), strategy, 1)
        with pytest.raises(DomainError):
            regret(trace, "not-a-class")

    def test_aggregator_regret_at_most_mistakes(self):
        fam = FiniteSupportFamily(tuple(range(1, 13)))
        target = support_hypothesis((1, 5))
        xs = [((t * 7) % 12) + 1 for t in range(120)]
        trace = run_game(learners.AggregatorLearner(fam),
                         nature.RealizableScripted(target, xs), 120)
        comparison = fam.component(2).cls.materialize()
        assert regret(trace, comparison) <= trace.mistakes

    def test_coinflip_expected_regret_matches_binomial_oracle(self):
        T = 400
        # exact E|S|/2 for S the centered simple random walk at T
        total = Fraction(0)
        for k in range(T + 1):
            total += Fraction(math.comb(T, k), 2 ** T) * abs(2 * k - T)
        oracle = float(total) / 2
        assert oracle == pytest.approx(math.sqrt(2 * T / math.pi) / 2, rel=0.01)

        def trial(seed):
            trace = run_game(learners.ConstantLearner(0),
                             nature.CoinFlip(seed), T)
            return float(regret(trace, TWO_CLASS))

        stats = monte_carlo(trial, trials=400, master_seed=8)
        assert abs(stats.mean - oracle) <= 4 * stats.se


class TestCsv:
    def test_golden_trace(self):
        strategy = nature.AgnosticScripted([0, 0, 0], [1, 0, 1])
        trace = run_game(learners.ConstantLearner(0), strategy, 3)
        expected = ("t,x,y,yhat,mistake,cum_mistakes,cum_best_rival\n"
                    "1,0,1,0,1,1,0\n"
                    "2,0,0,0,0,1,1\n"
                    "3,0,1,0,1,2,1\n")
        assert trace_to_csv(trace, TWO_CLASS) == expected

    def test_rival_column_blank_without_comparison(self):
        strategy = nature.AgnosticScripted([0], [1])
        trace = run_game(learners.ConstantLearner(0), strategy, 1)
        assert trace_to_csv(trace).splitlines()[1] == "1,0,1,0,1,1,"

    def test_replay_determinism(self):
        learner_spec = {"learner": "fpl",
                        "experts": [{"kind": "constant", "value": 0},
                                    {"kind": "constant", "value": 1}],
                        "k": [1.0, 1.0]}
        nature_spec = {"nature": "coin-flip"}
        one, _ = play_config(learner_spec, nature_spec, 80, seed=4)
        two, _ = play_config(learner_spec, nature_spec, 80, seed=4)
        assert trace_to_csv(one) == trace_to_csv(two)
        three, _ = play_config(learner_spec, nature_spec, 80, seed=5)
        assert trace_to_csv(one) != trace_to_csv(three)


class TestMonteCarlo:
    def test_requires_two_trials(self):
        with pytest.raises(ValueError):
            monte_carlo(lambda s: 0.0, trials=1)

    def test_seed_derivation_stable(self):
        assert trial_seeds(3, 5) == trial_seeds(3, 5)
        assert trial_seeds(3, 5) != trial_seeds(4, 5)

    def test_stats(self):
        stats = monte_carlo(lambda s: float(s % 7), trials=50, master_seed=0)
        assert stats.trials == 50
        assert stats.se == pytest.approx(
            np.std(stats.values, ddof=1) / math.sqrt(50))

    def test_regret_curve_with_bound(self):
        curve = regret_curve(
            lambda s: learners.ConstantLearner(0),
            lambda s: nature.CoinFlip(s),
            horizons=[25, 50], trials=40, master_seed=1,
            comparison=TWO_CLASS, bound_fn=lambda T: 3 * math.sqrt(T))
        rows = curve.rows()
        assert [r["T"] for r in rows] == [25, 50]
        assert rows[0]["bound"] == pytest.approx(15.0)
        assert all(r["trials"] == 40 for r in rows)


class TestConfigFactories:
    def test_learner_dispatch(self):
        cls_spec = TWO_CLASS.to_config()
        assert isinstance(make_learner({"learner": "soa", "class": cls_spec}),
                          learners.SoaLearner)
        assert isinstance(make_learner({"learner": "expert", "class": cls_spec,
                                        "key": [1, 3]}), learners.ExpertLearner)
        agg_spec = {"learner": "aggregator",
                    "family": {"family": "finite-support",
                               "params": {"domain": [1, 2, 3]}}}
        assert isinstance(make_learner(agg_spec), learners.AggregatorLearner)
        cov = make_learner({"learner": "cover",
                            "cover": [{"kind": "constant", "value": 0}]})
        assert isinstance(cov, learners.CoverLearner)
        assert isinstance(make_learner({"learner": "natural-threshold"}),
                          learners.NaturalThresholdLearner)
        with pytest.raises(DomainError):
            make_learner({"learner": "what"})

    def test_nature_dispatch(self):
        scripted = make_nature({"nature": "scripted", "x": [1, 2],
                                "target": {"kind": "threshold", "value": 2}})
        assert isinstance(scripted, nature.RealizableScripted)
        iid = make_nature({"nature": "iid",
                           "measure": {"support": [1, 2], "mass": ["1/2", "1/2"]},
                           "target": {"kind": "constant", "value": 0}}, seed=1)
        assert isinstance(iid, nature.StochasticIid)
        assert isinstance(make_nature({"nature": "window-halving", "depth": 8}),
                          nature.WindowHalving)
        committed = make_nature(
            {"nature": "tree-adversary", "mode": "committed",
             "class": FiniteClass.full_class(("a", "b")).to_config()},
            learner_spec={"learner": "soa",
                          "class": FiniteClass.full_class(("a", "b")).to_config()})
        assert isinstance(committed, nature.RealizableScripted)
        with pytest.raises(DomainError):
            make_nature({"nature": "what"})

    def test_committed_mode_needs_learner(self):
        with pytest.raises(DomainError):
            make_nature({"nature": "tree-adversary", "mode": "committed",
                         "class": FiniteClass.full_class(("a", "b")).to_config()})

    def test_regret_experiment_from_config(self):
        config = {
            "learner": {"learner": "fpl",
                        "experts": [{"kind": "constant", "value": 0},
                                    {"kind": "constant", "value": 1}],
                        "k": [1.0, 1.0]},
            "nature": {"nature": "coin-flip"},
            "comparison": TWO_CLASS.to_config(),
            "Ts": [30], "trials": 30, "master_seed": 5,
            "bound": {"kind": "fpl", "k": 1.0},
        }
        curve = runner.regret_experiment_from_config(config)
        row = curve.rows()[0]
        assert row["bound"] == pytest.approx(3 * math.sqrt(30))
        assert row["mean"] + 3 * row["se"] <= row["bound"]
