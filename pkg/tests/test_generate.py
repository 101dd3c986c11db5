import pytest

from unicore.generate import GeneratorError, GeneratorParams, generate_instance
from unicore.model import validate_instance
from unicore.textio import serialize_instance

PARAMS = GeneratorParams(seed=7, n_students=12, n_schools=5, capacity_range=(1, 3),
                         list_length_range=(0, 5), groups_per_school_range=(1, 4))


def test_same_seed_same_instance():
    assert serialize_instance(generate_instance(PARAMS)) == serialize_instance(generate_instance(PARAMS))


def test_different_seeds_differ():
    other = GeneratorParams(**{**PARAMS.__dict__, "seed": 8})
    assert serialize_instance(generate_instance(PARAMS)) != serialize_instance(generate_instance(other))


@pytest.mark.parametrize("seed", range(40))
def test_generated_instances_are_valid(seed):
    params = GeneratorParams(**{**PARAMS.__dict__, "seed": seed})
    inst = generate_instance(params)
    validate_instance(inst)
    assert len(inst.students) == 12 and len(inst.schools) == 5
    for s in inst.schools:
        assert 1 <= s.capacity <= 3
        assert 1 <= len(inst.priorities[s.id].between) <= 4
    for i in inst.students:
        assert len(inst.prefs[i]) == len(set(inst.prefs[i])) <= 5


def test_one_group_per_student_gives_singletons():
    inst = generate_instance(GeneratorParams(seed=3, n_students=6, n_schools=3,
                                             groups_per_school_range=(6, 6)))
    for p in inst.priorities.values():
        assert all(len(g) == 1 for g in p.between)
        assert tuple(next(iter(g)) for g in p.between) == p.within


def test_single_group():
    inst = generate_instance(GeneratorParams(seed=3, n_students=6, n_schools=3))
    assert all(len(p.between) == 1 for p in inst.priorities.values())


@pytest.mark.parametrize("changes", [
    {"n_students": 0},
    {"n_schools": 0},
    {"capacity_range": (0, 2)},
    {"capacity_range": (3, 2)},
    {"list_length_range": (0, 6)},
    {"groups_per_school_range": (1, 13)},
    {"groups_per_school_range": (0, 2)},
])
def test_infeasible_parameters(changes):
    with pytest.raises(GeneratorError):
        generate_instance(GeneratorParams(**{**PARAMS.__dict__, **changes}))
