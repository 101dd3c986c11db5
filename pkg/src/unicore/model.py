"""Instances, matches and their validation.

Students and schools are identified by plain strings. A student who is
unmatched is assigned ``None`` (exported as ``UNMATCHED``). Schools missing
from a student's preference list are unacceptable: the student ranks them
below being unmatched.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional

StudentId = str
SchoolId = str
Assignment = Optional[SchoolId]

UNMATCHED = None


class InstanceError(ValueError):
    """A single violated instance invariant.

    ``field`` names the part of the instance at fault (``"between"``,
    ``"within"``, ``"pref"``, ``"school"``, ``"students"``) and ``entity``
    the student or school it belongs to. ``line`` is filled in by the text
    parser when the offending declaration can be located.
    """

    def __init__(self, message: str, *, field: str, entity: str | None = None,
                 line: int | None = None):
        super().__init__(message)
        self.message = message
        self.field = field
        self.entity = entity
        self.line = line

    def __str__(self) -> str:
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message


class PartitionError(InstanceError):
    """Between-group classes do not partition the student set."""


class RefinementError(InstanceError):
    """Within-group order is not a permutation refining the between-group order."""


class DanglingReference(InstanceError):
    """An identifier that does not name a declared student or school."""


class NonPositiveCapacity(InstanceError):
    pass


class DuplicateEntry(InstanceError):
    pass


class MissingEntry(InstanceError):
    """A student without preferences or a school without priorities."""


class InvalidInstance(ValueError):
    """Raised by :func:`validate_instance`; carries every violation found."""

    def __init__(self, errors: list[InstanceError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class School:
    id: SchoolId
    capacity: int


@dataclass(frozen=True)
class SchoolPriorities:
    """Two-layer priority of one school.

    ``between`` lists the priority groups, highest first. ``within`` is a
    strict order over all students (highest first) that must refine
    ``between``.
    """

    owner: SchoolId
    between: tuple[frozenset[StudentId], ...]
    within: tuple[StudentId, ...]


@dataclass(frozen=True)
class Instance:
    """A school choice problem.

    ``students`` and ``schools`` fix the canonical order used for iteration
    and output. ``prefs`` maps each student to their ranked list of acceptable
    schools (best first).
    """

    students: tuple[StudentId, ...]
    schools: tuple[School, ...]
    prefs: Mapping[StudentId, tuple[SchoolId, ...]]
    priorities: Mapping[SchoolId, SchoolPriorities]

    @cached_property
    def school_ids(self) -> tuple[SchoolId, ...]:
        return tuple(s.id for s in self.schools)

    @cached_property
    def capacity(self) -> dict[SchoolId, int]:
        return {s.id: s.capacity for s in self.schools}

    @cached_property
    def _pref_key(self) -> dict[StudentId, dict[Assignment, int]]:
        # Strict order over S + {self}: listed schools, then self, then the
        # unacceptable schools in canonical order.
        keys = {}
        for i in self.students:
            ranked = self.prefs[i]
            key: dict[Assignment, int] = {s: k for k, s in enumerate(ranked)}
            key[UNMATCHED] = len(ranked)
            tail = len(ranked) + 1
            for s in self.school_ids:
                if s not in key:
                    key[s] = tail
                    tail += 1
            keys[i] = key
        return keys

    @cached_property
    def _group_of(self) -> dict[SchoolId, dict[StudentId, int]]:
        return {
            s: {i: g for g, members in enumerate(p.between) for i in members}
            for s, p in self.priorities.items()
        }

    @cached_property
    def _within_pos(self) -> dict[SchoolId, dict[StudentId, int]]:
        return {s: {i: k for k, i in enumerate(p.within)} for s, p in self.priorities.items()}

    def pref_key(self, i: StudentId, target: Assignment) -> int:
        """Sort key of ``target`` in student ``i``'s preference; lower is better."""
        return self._pref_key[i][target]

    def group(self, s: SchoolId, i: StudentId) -> int:
        return self._group_of[s][i]

    def within_pos(self, s: SchoolId, i: StudentId) -> int:
        return self._within_pos[s][i]


@dataclass(frozen=True)
class Match:
    """Total assignment of students to schools or to ``UNMATCHED``."""

    assignment: Mapping[StudentId, Assignment] = field(default_factory=dict)

    def __getitem__(self, i: StudentId) -> Assignment:
        return self.assignment[i]

    def __iter__(self) -> Iterator[StudentId]:
        return iter(self.assignment)

    def __len__(self) -> int:
        return len(self.assignment)

    def items(self):
        return self.assignment.items()

    def students_at(self, s: SchoolId) -> frozenset[StudentId]:
        return frozenset(i for i, t in self.assignment.items() if t == s)

    def occupancy(self) -> Counter:
        return Counter(t for t in self.assignment.values() if t is not UNMATCHED)

    def with_changes(self, changes: Mapping[StudentId, Assignment]) -> "Match":
        return Match({**self.assignment, **changes})


def validate_instance(raw: Instance) -> Instance:
    """Return ``raw`` unchanged if it is a well-formed instance.

    Every violation is collected before raising :class:`InvalidInstance`,
    so a caller sees all problems at once rather than the first.
    """
    errors: list[InstanceError] = []
    students = list(raw.students)
    student_set = set(students)
    school_ids = [s.id for s in raw.schools]
    school_set = set(school_ids)

    for i, n in Counter(students).items():
        if n > 1:
            errors.append(DuplicateEntry(f"student {i!r} declared {n} times",
                                         field="students", entity=i))
    for s, n in Counter(school_ids).items():
        if n > 1:
            errors.append(DuplicateEntry(f"school {s!r} declared {n} times",
                                         field="school", entity=s))
    for x in sorted(student_set & school_set):
        errors.append(DuplicateEntry(f"{x!r} is both a student and a school",
                                     field="school", entity=x))
    for school in raw.schools:
        if not isinstance(school.capacity, int) or school.capacity < 1:
            errors.append(NonPositiveCapacity(
                f"school {school.id!r} has capacity {school.capacity}; must be >= 1",
                field="school", entity=school.id))

    for i in students:
        if i not in raw.prefs:
            errors.append(MissingEntry(f"student {i!r} has no preference list",
                                       field="pref", entity=i))
    for i, ranked in raw.prefs.items():
        if i not in student_set:
            errors.append(DanglingReference(f"preferences given for unknown student {i!r}",
                                            field="pref", entity=i))
            continue
        for s, n in Counter(ranked).items():
            if n > 1:
                errors.append(DuplicateEntry(f"student {i!r} lists school {s!r} {n} times",
                                             field="pref", entity=i))
        for s in ranked:
            if s not in school_set:
                errors.append(DanglingReference(f"student {i!r} lists unknown school {s!r}",
                                                field="pref", entity=i))

    for s in school_ids:
        if s not in raw.priorities:
            errors.append(MissingEntry(f"school {s!r} has no priorities",
                                       field="between", entity=s))
    for s, prio in raw.priorities.items():
        if s not in school_set:
            errors.append(DanglingReference(f"priorities given for unknown school {s!r}",
                                            field="between", entity=s))
            continue
        if prio.owner != s:
            errors.append(DanglingReference(
                f"priorities keyed by {s!r} but owned by {prio.owner!r}",
                field="between", entity=s))
        errors.extend(_check_priorities(s, prio, students, student_set))

    if errors:
        raise InvalidInstance(errors)
    return raw


def _check_priorities(s: SchoolId, prio: SchoolPriorities, students: list[StudentId],
                      student_set: set[StudentId]) -> list[InstanceError]:
    errors: list[InstanceError] = []
    seen: Counter = Counter()
    for g in prio.between:
        if not g:
            errors.append(PartitionError(f"school {s!r} has an empty priority group",
                                         field="between", entity=s))
        seen.update(g)
    unknown = [i for i in seen if i not in student_set]
    if unknown:
        errors.append(DanglingReference(
            f"school {s!r} groups name unknown students {sorted(unknown)}",
            field="between", entity=s))
    missing = [i for i in students if i not in seen]
    if missing:
        errors.append(PartitionError(f"school {s!r} groups miss students {missing}",
                                     field="between", entity=s))
    dup = sorted(i for i, n in seen.items() if n > 1)
    if dup:
        errors.append(PartitionError(f"school {s!r} places students {dup} in several groups",
                                     field="between", entity=s))

    order = list(prio.within)
    if Counter(order) != Counter(students):
        errors.append(RefinementError(
            f"within order at {s!r} is not a permutation of the students",
            field="within", entity=s))
        return errors
    if missing or dup or unknown:
        return errors
    group = {i: g for g, members in enumerate(prio.between) for i in members}
    for k in range(len(order) - 1):
        x, y = order[k], order[k + 1]
        if group[x] > group[y]:
            errors.append(RefinementError(
                f"within order at {s!r} puts {x!r} above {y!r} "
                f"from a higher priority group",
                field="within", entity=s))
            break
    return errors


def is_valid_match(inst: Instance, m: Match) -> bool:
    """True iff ``m`` assigns every student exactly once and respects capacities."""
    if set(m.assignment) != set(inst.students):
        return False
    cap = inst.capacity
    for t in m.assignment.values():
        if t is not UNMATCHED and t not in cap:
            return False
    return all(n <= cap[s] for s, n in m.occupancy().items())


def is_individually_rational(inst: Instance, m: Match) -> bool:
    return all(
        m[i] is UNMATCHED or m[i] in inst.prefs[i]
        for i in inst.students
    )


def student_rank(inst: Instance, i: StudentId, m: Match) -> Optional[int]:
    """1-based position of ``m[i]`` in ``i``'s list, or ``UNMATCHED``.

    Raises ``ValueError`` if ``i`` holds a school they did not list.
    """
    s = m[i]
    if s is UNMATCHED:
        return UNMATCHED
    return inst.prefs[i].index(s) + 1


def weakly_prefers(inst: Instance, i: StudentId, x: Assignment, y: Assignment) -> bool:
    return inst.pref_key(i, x) <= inst.pref_key(i, y)


def strictly_prefers(inst: Instance, i: StudentId, x: Assignment, y: Assignment) -> bool:
    return inst.pref_key(i, x) < inst.pref_key(i, y)


def make_instance(students: Iterable[StudentId], capacities: Mapping[SchoolId, int],
                  prefs: Mapping[StudentId, Iterable[SchoolId]],
                  between: Mapping[SchoolId, Iterable[Iterable[StudentId]]],
                  within: Mapping[SchoolId, Iterable[StudentId]]) -> Instance:
    """Build and validate an instance from plain Python containers."""
    inst = Instance(
        students=tuple(students),
        schools=tuple(School(s, q) for s, q in capacities.items()),
        prefs={i: tuple(p) for i, p in prefs.items()},
        priorities={
            s: SchoolPriorities(s, tuple(frozenset(g) for g in between[s]),
                                  tuple(within.get(s, ())))
            for s in between
        },
    )
    return validate_instance(inst)
