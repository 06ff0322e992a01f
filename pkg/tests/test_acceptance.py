"""Acceptance suite: every bound the package claims, verified at its
stated tolerance. Exact checks carry zero tolerance; expectation checks
compare the Monte-Carlo mean with a three-standard-error margin against
the analytic expression. One pass/fail line prints per criterion."""

from nuolab import verification


def _assert(result):
    print()
    print(result.line())
    assert result.passed, result.detail


def test_dimension_equals_game_value():
    # all classes over <= 3 points plus 50 random classes over 4-5 points
    _assert(verification.check_ldim_minimax_equality(seed=0, random_count=50))


def test_soa_mistakes_within_dimension():
    # committed forcing scripts and exhaustive adversary enumeration
    _assert(verification.check_soa_mistake_bound(seed=0, random_count=50))


def test_aggregator_square_bound():
    # twelve-point bounded-support union, truth in component k = 1, 2, 3,
    # adversarial scripted streams of length 200, mistakes <= (d_k + k)^2
    _assert(verification.check_aggregator_square_bound(horizon=200))


def test_cover_learner_index_bound():
    # targets covered at index 1, 5, 10; iid streams; mistakes <= m
    _assert(verification.check_cover_index_bound(horizon=80))


def test_expert_key_exists_for_every_sequence():
    # exhaustive label patterns at T = 8 and full point/label product at
    # T = 4 over dimension-1 and dimension-2 classes
    _assert(verification.check_expert_key_bound())


def test_fpl_regret_within_complexity_bound():
    # fixed expert sets, T = 400, 2000 trials, mean + 3 SE <= (k_i + 2) sqrt(T)
    _assert(verification.check_fpl_regret_bound(trials=2000, horizon=400))


def test_hierarchical_regret_within_explicit_bound():
    # two-component family with dims <= 2, T in {100, 200}, 500 trials
    _assert(verification.check_hierarchical_regret_bound(trials=500,
                                                         horizons=(100, 200)))


def test_coinflip_regret_floor():
    # fair-coin labels, T in {100, 400}, 2000 trials,
    # mean - 3 SE >= 3 sqrt(T) / 64 for the hierarchical learner and baselines
    _assert(verification.check_coinflip_regret_floor(trials=2000,
                                                     horizons=(100, 400)))


def test_complexity_mass_ceilings():
    # partial sums over 10^4 terms: component scheme <= 1/e, pools <= 0.83
    _assert(verification.check_complexity_mass(terms=10_000))


def test_window_halving_forces_every_round():
    # every learner errs on each of >= 32 rounds; exact realizability check
    _assert(verification.check_window_halving(rounds=40))
