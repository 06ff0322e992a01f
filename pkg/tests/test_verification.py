import json

from nuolab import cli, verification
from nuolab.hypotheses import FiniteClass
from nuolab.littlestone import ldim


class TestOracles:
    def test_exhaustive_adversary_on_known_classes(self):
        assert verification.max_adaptive_soa_mistakes(
            FiniteClass.full_class(("a", "b"))) == 2
        assert verification.max_adaptive_soa_mistakes(
            FiniteClass(("a",), [[0]])) == 0
        thr = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        assert verification.max_adaptive_soa_mistakes(thr) == 2

    def test_small_corpus_size(self):
        corpus = verification.small_class_corpus()
        assert len(corpus) == (2 ** 2 - 1) + (2 ** 4 - 1) + (2 ** 8 - 1)

    def test_random_corpus_is_seed_stable(self):
        one = verification.random_class_corpus(10, seed=3)
        two = verification.random_class_corpus(10, seed=3)
        assert [c.rows for c in one] == [c.rows for c in two]


class TestFaultInjection:
    def test_corrupted_dimension_is_caught(self):
        def corrupted(cls):
            d = ldim(cls)
            return d + 1 if len(cls) == 3 else d

        result = verification.check_ldim_minimax_equality(
            random_count=5, ldim_fn=corrupted)
        assert not result.passed
        assert "FiniteClass" in result.detail   # counterexample printed

    def test_exact_checks_seed_independent(self):
        for check in (verification.check_ldim_minimax_equality,
                      verification.check_soa_mistake_bound):
            a = check(seed=1, random_count=12)
            b = check(seed=2, random_count=12)
            assert a.passed == b.passed


class TestReducedScaleChecks:
    # same code paths as the acceptance run, at a fraction of the trials
    def test_fpl_regret(self):
        assert verification.check_fpl_regret_bound(trials=60, horizon=100).passed

    def test_hierarchical(self):
        assert verification.check_hierarchical_regret_bound(
            trials=12, horizons=(50,)).passed

    def test_coinflip_floor(self):
        assert verification.check_coinflip_regret_floor(
            trials=60, horizons=(50,)).passed

    def test_aggregator(self):
        assert verification.check_aggregator_square_bound(horizon=60).passed

    def test_cover(self):
        assert verification.check_cover_index_bound(horizon=40).passed

    def test_window(self):
        assert verification.check_window_halving(rounds=8).passed


class TestCli:
    def test_ldim_command(self, tmp_path, capsys):
        path = tmp_path / "cls.json"
        path.write_text(json.dumps(FiniteClass.full_class(("a", "b")).to_config()))
        assert cli.main(["ldim", str(path), "--witness"]) == 0
        out = capsys.readouterr().out
        assert "ldim:       2" in out and "witness points" in out

    def test_play_command(self, tmp_path, capsys):
        learner = json.dumps({"learner": "constant", "value": 0})
        nat = json.dumps({"nature": "scripted", "x": [1, 2, 3],
                          "target": {"kind": "threshold", "value": 2}})
        csv_path = tmp_path / "trace.csv"
        assert cli.main(["play", "--learner", learner, "--nature", nat,
                         "-T", "3", "--seed", "1", "--csv", str(csv_path)]) == 0
        assert "mistakes: 2" in capsys.readouterr().out
        assert csv_path.read_text().startswith("t,x,y,yhat")

    def test_regret_command(self, tmp_path, capsys):
        config = {
            "learner": {"learner": "constant", "value": 0},
            "nature": {"nature": "coin-flip"},
            "comparison": {"domain": [0], "hypotheses": [[0], [1]]},
            "T": 20, "trials": 20, "master_seed": 0,
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        assert cli.main(["regret", "--config", str(path)]) == 0
        assert "mean" in capsys.readouterr().out

    def test_verify_command_exit_codes(self, monkeypatch, capsys):
        ok = verification.CheckResult("stub", True, "fine")
        bad = verification.CheckResult("stub", False, "broken")
        monkeypatch.setattr(verification, "default_suite", lambda seed=0: [ok])
        assert cli.main(["verify"]) == 0
        assert "[PASS] stub" in capsys.readouterr().out
        monkeypatch.setattr(verification, "default_suite", lambda seed=0: [ok, bad])
        assert cli.main(["verify"]) == 1
        out = capsys.readouterr().out
        assert "[FAIL] stub" in out and "1/2 checks passed" in out
