import itertools

import pytest

from oracles import corpus, responsive_weak, responsive_weakly_above
from unicore.priority import (
    Comparison,
    between_compare,
    group_index,
    set_weak_dominance,
    sets_equivalent,
    upper_contour_efficient,
    upper_contour_within,
    within_compare,
)


def subsets(xs, max_size=None):
    xs = list(xs)
    top = len(xs) if max_size is None else max_size
    for r in range(top + 1):
        yield from itertools.combinations(xs, r)


def test_group_index(ex1, ex1_strict):
    assert group_index(ex1, "a", "1") == 0
    assert group_index(ex1, "a'", "1'") == 2
    for s, prio in ex1_strict.priorities.items():
        for rank, i in enumerate(prio.within):
            assert group_index(ex1_strict, s, i) == rank


def test_between_compare(ex1):
    assert between_compare(ex1, "a", "1", "2") is Comparison.SAME
    assert between_compare(ex1, "a'", "3'", "1'") is Comparison.HIGHER
    assert between_compare(ex1, "a'", "1'", "3'") is Comparison.LOWER
    for s in ex1.school_ids:
        for i in ex1.students:
            assert between_compare(ex1, s, i, i) is Comparison.SAME


def test_within_compare(ex1):
    assert within_compare(ex1, "a", "2", "3") is Comparison.HIGHER
    assert within_compare(ex1, "a", "3", "1") is Comparison.HIGHER
    assert within_compare(ex1, "a", "1", "1") is Comparison.SAME
    for s in ex1.school_ids:
        for i, j in itertools.permutations(ex1.students, 2):
            if between_compare(ex1, s, i, j) is Comparison.HIGHER:
                assert within_compare(ex1, s, i, j) is Comparison.HIGHER


def test_sets_equivalent_examples(ex1):
    assert sets_equivalent(ex1, "a", {"1"}, {"2"})
    assert not sets_equivalent(ex1, "a'", {"3'"}, {"1'"})
    assert sets_equivalent(ex1, "b", {"1", "3"}, {"1", "3"})


def test_set_weak_dominance_examples(ex1):
    assert set_weak_dominance(ex1, "a", {"1"}, {"2"})
    assert set_weak_dominance(ex1, "a", {"2"}, {"1"})
    assert set_weak_dominance(ex1, "a'", {"2'"}, {"1'"})
    assert not set_weak_dominance(ex1, "a'", {"1'"}, {"2'"})
    # larger set against a smaller one sharing a group
    assert set_weak_dominance(ex1, "a", {"1", "2"}, {"2"})
    assert not set_weak_dominance(ex1, "a", {"2"}, {"1", "2"})


def test_upper_contours(ex1):
    assert upper_contour_within(ex1, "a", "1") == {"1", "2", "3"}
    assert upper_contour_within(ex1, "a'", "3'") == {"3'"}
    assert upper_contour_within(ex1, "a", "2") == {"2"}
    assert upper_contour_efficient(ex1, "a", "1") == {"2", "3"}
    assert upper_contour_efficient(ex1, "a", "2") == set()


SMALL = corpus(25, seed=11, max_students=5, max_schools=2)


@pytest.mark.parametrize("inst", SMALL)
def test_dominance_matches_pairing_enumeration(inst):
    for s in inst.school_ids:
        for a in subsets(inst.students, 3):
            for b in subsets(inst.students, 3):
                assert set_weak_dominance(inst, s, a, b) == responsive_weak(inst, s, a, b)


@pytest.mark.parametrize("inst", SMALL)
def test_equivalence_is_mutual_dominance(inst):
    for s in inst.school_ids:
        for r in range(len(inst.students) + 1):
            for a, b in itertools.product(itertools.combinations(inst.students, r), repeat=2):
                mutual = responsive_weakly_above(inst, s, a, b) and responsive_weakly_above(inst, s, b, a)
                assert sets_equivalent(inst, s, a, b) == mutual


@pytest.mark.parametrize("inst", SMALL[:10])
def test_dominance_reflexive_and_transitive(inst):
    for s in inst.school_ids:
        for r in range(1, len(inst.students) + 1):
            sets = list(itertools.combinations(inst.students, r))
            for a in sets:
                assert set_weak_dominance(inst, s, a, a)
            for a, b, c in itertools.product(sets, repeat=3):
                if set_weak_dominance(inst, s, a, b) and set_weak_dominance(inst, s, b, c):
                    assert set_weak_dominance(inst, s, a, c)


@pytest.mark.parametrize("inst", SMALL)
def test_within_contour_is_efficient_contour_within_group(inst):
    for s in inst.school_ids:
        for i in inst.students:
            group = inst.priorities[s].between[inst.group(s, i)]
            expected = (upper_contour_efficient(inst, s, i) & group) | {i}
            assert upper_contour_within(inst, s, i) == expected
