"""Comparisons under a school's between-group and within-group priorities.

Group indices count from 0 at the highest priority group. Sets of students
are compared under the responsive extension of the between-group order.
"""
from __future__ import annotations

import enum
from collections import Counter
from typing import Collection

from .model import Instance, SchoolId, StudentId


class Comparison(enum.Enum):
    HIGHER = 1
    SAME = 0
    LOWER = -1


def group_index(inst: Instance, s: SchoolId, i: StudentId) -> int:
    return inst.group(s, i)


def priority_group(inst: Instance, s: SchoolId, i: StudentId) -> frozenset[StudentId]:
    return inst.priorities[s].between[inst.group(s, i)]


def between_compare(inst: Instance, s: SchoolId, i: StudentId, j: StudentId) -> Comparison:
    gi, gj = inst.group(s, i), inst.group(s, j)
    if gi == gj:
        return Comparison.SAME
    return Comparison.HIGHER if gi < gj else Comparison.LOWER


def within_compare(inst: Instance, s: SchoolId, i: StudentId, j: StudentId) -> Comparison:
    pi, pj = inst.within_pos(s, i), inst.within_pos(s, j)
    if pi == pj:
        return Comparison.SAME
    return Comparison.HIGHER if pi < pj else Comparison.LOWER


def between_higher(inst: Instance, s: SchoolId, i: StudentId, j: StudentId) -> bool:
    """``i`` is in a strictly higher priority group than ``j`` at ``s``."""
    return inst.group(s, i) < inst.group(s, j)


def within_higher(inst: Instance, s: SchoolId, i: StudentId, j: StudentId) -> bool:
    return inst.within_pos(s, i) < inst.within_pos(s, j)


def group_counts(inst: Instance, s: SchoolId, students: Collection[StudentId]) -> Counter:
    return Counter(inst.group(s, i) for i in students)


def sets_equivalent(inst: Instance, s: SchoolId, a: Collection[StudentId],
                    b: Collection[StudentId]) -> bool:
    """Both sets hold the same number of students from every priority group at ``s``."""
    return group_counts(inst, s, a) == group_counts(inst, s, b)


def set_weak_dominance(inst: Instance, s: SchoolId, a: Collection[StudentId],
                       b: Collection[StudentId]) -> bool:
    """Responsive comparison ``a`` weakly above ``b`` at ``s``.

    For equal sizes, pair the members best-with-best after sorting by group;
    ``a`` dominates when each of its members is in a weakly higher group
    than its partner. A larger ``a`` dominates when its ``len(b)`` best
    members do. A smaller ``a`` never does.
    """
    if len(a) < len(b):
        return False
    ga = sorted(inst.group(s, i) for i in a)[: len(b)]
    gb = sorted(inst.group(s, j) for j in b)
    return all(x <= y for x, y in zip(ga, gb))


def upper_contour_within(inst: Instance, s: SchoolId, i: StudentId) -> frozenset[StudentId]:
    """Members of ``i``'s group at ``s`` whose within priority is weakly above hers."""
    pos = inst.within_pos(s, i)
    return frozenset(j for j in priority_group(inst, s, i) if inst.within_pos(s, j) <= pos)


def upper_contour_efficient(inst: Instance, s: SchoolId, i: StudentId) -> frozenset[StudentId]:
    """All students strictly above ``i`` in ``s``'s within order, across groups."""
    return frozenset(inst.priorities[s].within[: inst.within_pos(s, i)])
