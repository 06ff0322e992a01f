from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nuolab.hypotheses import DomainError, FiniteClass
from nuolab.littlestone import (CapacityError, ShatteredTreeWitness,
                                StructureError, VersionSpace, ldim,
                                minimax_mistakes, path_node_indices,
                                shattered_tree_witness, verify_witness)


@st.composite
def finite_classes(st_draw, max_points=4, max_rows=10):
    m = st_draw(st.integers(1, max_points))
    all_rows = list(product((0, 1), repeat=m))
    rows = st_draw(st.lists(st.sampled_from(all_rows), min_size=1,
                            max_size=min(max_rows, len(all_rows)), unique=True))
    return FiniteClass(("a", "b", "c", "d")[:m], rows)


def test_node_index_formula():
    # independent oracle: i_t = 2^(t-1) + sum_{j<t} y_j 2^(t-1-j)
    for d in (1, 2, 3, 4):
        for labeling in product((0, 1), repeat=d):
            expected = [2 ** (t - 1) + sum(labeling[j] * 2 ** (t - 2 - j)
                                           for j in range(t - 1))
                        for t in range(1, d + 1)]
            assert path_node_indices(labeling) == expected


class TestLdim:
    def test_singleton_is_zero(self):
        assert ldim(FiniteClass(("a", "b"), [[0, 1]])) == 0

    def test_full_class_on_three_points(self):
        assert ldim(FiniteClass.full_class(("a", "b", "c"))) == 3

    def test_thresholds(self):
        assert ldim(FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))) == 2

    def test_empty_class_is_error(self):
        empty = FiniteClass.full_class(("a",)).restrict("a", 0).restrict("a", 1)
        with pytest.raises(DomainError):
            ldim(empty)

    @settings(max_examples=80, deadline=None)
    @given(finite_classes())
    def test_log2_size_ceiling(self, cls):
        assert ldim(cls) <= len(cls).bit_length() - 1

    @settings(max_examples=80, deadline=None)
    @given(finite_classes(), st.integers(0, 3))
    def test_restriction_monotone_and_progresses(self, cls, pi):
        x = cls.domain[pi % len(cls.domain)]
        d = ldim(cls)
        zeros, ones = cls.restrict(x, 0), cls.restrict(x, 1)
        dims = [ldim(sub) for sub in (zeros, ones) if not sub.is_empty]
        assert all(v <= d for v in dims)
        if d >= 1 and len(dims) == 2:
            assert min(dims) <= d - 1


class TestWitness:
    def test_full_class_depth_two(self):
        cls = FiniteClass.full_class(("a", "b"))
        w = shattered_tree_witness(cls, 2)
        assert w.points == ("a", "b", "b")
        assert verify_witness(w, cls)
        assert set(w.realizers) == set(product((0, 1), repeat=2))

    def test_singleton_has_no_witness(self):
        assert shattered_tree_witness(FiniteClass(("a",), [[0]]), 1) is None

    def test_thresholds_depth_three_none(self):
        cls = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        assert shattered_tree_witness(cls, 3) is None

    def test_depth_zero_rejected(self):
        with pytest.raises(ValueError):
            shattered_tree_witness(FiniteClass.full_class(("a",)), 0)

    def test_verify_rejects_unshattered(self):
        # {00,01,10} on (a,b): labeling (1,1) has no realizer for points (a,b,b)
        cls = FiniteClass(("a", "b"), [[0, 0], [0, 1], [1, 0]])
        w = ShatteredTreeWitness(2, ("a", "b", "b"))
        assert not verify_witness(w, cls)

    def test_verify_depth_one(self):
        cls = FiniteClass.full_class(("a", "b"))
        assert verify_witness(ShatteredTreeWitness(1, ("a",)), cls)

    def test_structure_error(self):
        with pytest.raises(StructureError):
            ShatteredTreeWitness(2, ("a", "b"))

    def test_realizers_are_consistent(self):
        cls = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        w = shattered_tree_witness(cls, 2)
        for labeling, label in w.realizers.items():
            h = cls.hypothesis(label)
            for node, y in zip(path_node_indices(labeling), labeling):
                assert h(w.points[node - 1]) == y

    @settings(max_examples=50, deadline=None)
    @given(finite_classes())
    def test_witness_exists_exactly_up_to_dim(self, cls):
        d = ldim(cls)
        if d >= 1:
            w = shattered_tree_witness(cls, d)
            assert w is not None and verify_witness(w, cls)
        assert shattered_tree_witness(cls, d + 1) is None


class TestMinimax:
    def test_examples(self):
        assert minimax_mistakes(FiniteClass.full_class(("a", "b"))) == 2
        assert minimax_mistakes(FiniteClass(("a",), [[0]])) == 0
        thr = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        assert minimax_mistakes(thr) == 2 == ldim(thr)

    def test_capacity_error(self):
        big = FiniteClass.full_class(tuple("abcdefghij"))
        with pytest.raises(CapacityError):
            minimax_mistakes(big)

    @settings(max_examples=60, deadline=None)
    @given(finite_classes())
    def test_equals_dimension(self, cls):
        assert minimax_mistakes(cls) == ldim(cls)


class TestVersionSpace:
    def test_restrict_and_labels(self):
        cls = FiniteClass.full_class(("a", "b"))
        vs = VersionSpace.full(cls).restrict("a", 1)
        assert vs.size == 2 and vs.labels() == [2, 3]
        assert vs.constraints == (("a", 1),)

    def test_cached_dim_matches_recomputation(self):
        cls = FiniteClass.thresholds((1, 2, 3), (1, 2, 3, 4))
        vs = VersionSpace.full(cls).restrict(2, 1)
        d = vs.ldim()
        rebuilt = FiniteClass((1, 2, 3), [cls.rows[i] for i in sorted(vs.ids)])
        assert d == ldim(rebuilt)
