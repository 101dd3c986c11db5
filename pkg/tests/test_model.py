import itertools

import pytest

from unicore.model import (
    UNMATCHED,
    Instance,
    InvalidInstance,
    Match,
    NonPositiveCapacity,
    PartitionError,
    RefinementError,
    School,
    SchoolPriorities,
    DanglingReference,
    is_individually_rational,
    is_valid_match,
    make_instance,
    student_rank,
    validate_instance,
)


def _errors(exc_info, kind):
    return [e for e in exc_info.value.errors if isinstance(e, kind)]


def test_ex1_is_valid(ex1):
    assert validate_instance(ex1) is ex1
    assert len(ex1.students) == 6
    assert len(ex1.schools) == 6
    assert all(s.capacity == 1 for s in ex1.schools)


def test_refinement_violation_is_reported():
    with pytest.raises(InvalidInstance) as exc:
        make_instance(
            ["x", "y"], {"s": 1}, {"x": ["s"], "y": ["s"]},
            between={"s": [["x"], ["y"]]}, within={"s": ["y", "x"]},
        )
    [err] = _errors(exc, RefinementError)
    assert err.entity == "s"


def test_zero_capacity_is_reported():
    with pytest.raises(InvalidInstance) as exc:
        make_instance(["x"], {"s": 0}, {"x": ["s"]}, between={"s": [["x"]]}, within={"s": ["x"]})
    assert _errors(exc, NonPositiveCapacity)


def test_all_violations_collected():
    raw = Instance(
        students=("x", "y"),
        schools=(School("s", 0), School("t", 1)),
        prefs={"x": ("s", "zz"), "y": ()},
        priorities={
            "s": SchoolPriorities("s", (frozenset({"x"}),), ("x", "y")),
            "t": SchoolPriorities("t", (frozenset({"x", "y"}),), ("x", "y")),
        },
    )
    with pytest.raises(InvalidInstance) as exc:
        validate_instance(raw)
    assert _errors(exc, NonPositiveCapacity)
    assert _errors(exc, DanglingReference)
    assert _errors(exc, PartitionError)


def test_refinement_check_matches_pairwise_definition(ex1, ex1_strict, ex1_coarse):
    for inst in (ex1, ex1_strict, ex1_coarse):
        for s, prio in inst.priorities.items():
            group = {i: g for g, members in enumerate(prio.between) for i in members}
            order = list(prio.within)
            for x, y in itertools.permutations(inst.students, 2):
                if group[x] < group[y]:
                    assert order.index(x) < order.index(y)


def test_valid_match(ex1, mu_uc):
    assert is_valid_match(ex1, mu_uc)
    two_at_a = mu_uc.with_changes({"2": "a"})
    assert not is_valid_match(ex1, two_at_a)
    missing = Match({i: t for i, t in mu_uc.items() if i != "3"})
    assert not is_valid_match(ex1, missing)


def test_occupancy_within_capacity(ex1, mu_uc, mu_gs, mu_rtz):
    for m in (mu_uc, mu_gs, mu_rtz):
        for s, n in m.occupancy().items():
            assert n <= ex1.capacity[s]


def test_individual_rationality(ex1, ex2, mu_gs, mu_da):
    assert is_individually_rational(ex2, mu_da)
    assert is_individually_rational(ex1, mu_gs)
    ex2_three_unlisted = Instance(
        ex2.students, ex2.schools, {**ex2.prefs, "3": ("a",)}, ex2.priorities)
    bad = Match({"1": UNMATCHED, "2": "a", "3": "b"})
    assert not is_individually_rational(ex2_three_unlisted, bad)


def test_student_rank(ex1, ex2, mu_uc, mu_gs, mu_da):
    assert student_rank(ex1, "1", mu_uc) == 1
    assert student_rank(ex1, "1", mu_gs) == 2
    assert student_rank(ex2, "3", mu_da) is UNMATCHED


def test_unacceptable_schools_rank_below_unmatched(ex2):
    inst = Instance(ex2.students, ex2.schools, {**ex2.prefs, "3": ("a",)}, ex2.priorities)
    assert inst.pref_key("3", "a") < inst.pref_key("3", UNMATCHED) < inst.pref_key("3", "b")
