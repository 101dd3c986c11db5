"""Seeded random instances.

Randomness comes from numpy's PCG64 generator, so a seed reproduces the same
instance across runs and platforms for a given numpy release.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance, School, SchoolPriorities, validate_instance


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    seed: int
    n_students: int
    n_schools: int
    capacity_range: tuple[int, int] = (1, 1)
    list_length_range: tuple[int, int] = (1, 1)
    groups_per_school_range: tuple[int, int] = (1, 1)

    def check(self) -> None:
        if self.n_students < 1 or self.n_schools < 1:
            raise GeneratorError("need at least one student and one school")
        for name in ("capacity_range", "list_length_range", "groups_per_school_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise GeneratorError(f"{name} {lo}..{hi} is empty")
        if self.capacity_range[0] < 1:
            raise GeneratorError("capacities must be at least 1")
        if self.list_length_range[0] < 0 or self.list_length_range[1] > self.n_schools:
            raise GeneratorError("list lengths must lie in 0..n_schools")
        lo, hi = self.groups_per_school_range
        if lo < 1 or hi > self.n_students:
            raise GeneratorError("groups per school must lie in 1..n_students")


def generate_instance(params: GeneratorParams) -> Instance:
    """Uniform preference lists, random ordered group partitions and a lottery within groups."""
    params.check()
    rng = np.random.default_rng(params.seed)
    students = tuple(f"i{k}" for k in range(1, params.n_students + 1))
    school_ids = tuple(f"s{k}" for k in range(1, params.n_schools + 1))

    schools = tuple(
        School(s, int(rng.integers(params.capacity_range[0], params.capacity_range[1] + 1)))
        for s in school_ids
    )
    prefs = {}
    for i in students:
        length = int(rng.integers(params.list_length_range[0], params.list_length_range[1] + 1))
        prefs[i] = tuple(school_ids[k] for k in rng.permutation(len(school_ids))[:length])

    priorities = {}
    n = len(students)
    for s in school_ids:
        lo, hi = params.groups_per_school_range
        n_groups = int(rng.integers(lo, hi + 1))
        shuffled = [students[k] for k in rng.permutation(n)]
        cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), size=n_groups - 1, replace=False))
        bounds = [0, *cuts, n]
        # a shuffled block is already a uniform lottery within its group
        groups = [shuffled[a:b] for a, b in zip(bounds, bounds[1:])]
        priorities[s] = SchoolPriorities(
            s, tuple(frozenset(g) for g in groups), tuple(x for g in groups for x in g))

    return validate_instance(Instance(students, schools, prefs, priorities))
