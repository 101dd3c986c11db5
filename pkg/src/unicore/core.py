"""Blocking coalitions and core membership.

Three notions of enforcement are checked here:

* between-group: every coalition member either takes a vacant seat or
  outranks, by priority group, some current occupant of their new school;
* within-group: every school the coalition moves into keeps the same number
  of students from each priority group, and the within-group interrupters
  of the members there (students of their own group with weakly higher
  within priority, outside the coalition) fit in the school's spare seats;
* efficient: as within-group, without the group-count condition and with
  interrupters drawn from everyone strictly above in the within order.

A match is in the unified core if it admits neither a between-group nor a
within-group block. The between-group check is pairwise and exact. The
within-group and efficient checks are exhaustive searches bounded by a node
budget; when the budget runs out they raise :class:`BudgetExceeded` rather
than guess.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Collection, Optional

from networkx.algorithms.bipartite import hopcroft_karp_matching
import networkx as nx

from .model import (
    UNMATCHED,
    Assignment,
    Instance,
    Match,
    SchoolId,
    StudentId,
    is_valid_match,
)
from .priority import (
    group_counts,
    sets_equivalent,
    upper_contour_efficient,
    upper_contour_within,
)

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """An exhaustive search visited more nodes than its budget allows."""

    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} nodes exhausted; verdict withheld")
        self.budget = budget


class BlockKind(enum.Enum):
    BETWEEN = "between"
    WITHIN = "within"
    EFFICIENT = "efficient"


class Membership(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SchoolEvidence:
    school: SchoolId
    equivalent: bool
    interrupters: int
    spare_seats: int


@dataclass(frozen=True)
class BlockCertificate:
    kind: BlockKind
    coalition: frozenset[StudentId]
    alt_match: Match
    evidence: tuple[SchoolEvidence, ...] = ()


@dataclass(frozen=True)
class CoreVerdict:
    status: Membership
    certificate: Optional[BlockCertificate] = None

    def __bool__(self) -> bool:
        return self.status is Membership.IN


def coalition_prefers(inst: Instance, coalition: Collection[StudentId], nu: Match,
                      mu: Match) -> bool:
    """Every member weakly prefers ``nu`` and at least one strictly."""
    strict = False
    for i in coalition:
        a, b = inst.pref_key(i, nu[i]), inst.pref_key(i, mu[i])
        if a > b:
            return False
        strict = strict or a < b
    return strict


def can_between_enforce(inst: Instance, coalition: Collection[StudentId], nu: Match,
                        mu: Match) -> bool:
    for i in coalition:
        s = nu[i]
        if s is UNMATCHED:
            continue
        occupants = mu.students_at(s)
        if len(occupants) < inst.capacity[s]:
            continue
        if not any(inst.group(s, i) < inst.group(s, j) for j in occupants):
            return False
    return True


def _targets(coalition: Collection[StudentId], nu: Match) -> list[SchoolId]:
    seen = {nu[i] for i in coalition} - {UNMATCHED}
    return sorted(seen)


def interrupter_count(inst: Instance, coalition: Collection[StudentId], nu: Match,
                      s: SchoolId, *, efficient: bool = False) -> int:
    """Interrupters of the members placed at ``s``, summed over members.

    A student who interrupts several members is counted once for each.
    """
    members = set(coalition)
    contour = upper_contour_efficient if efficient else upper_contour_within
    return sum(
        len(contour(inst, s, i) - members)
        for i in members if nu[i] == s
    )


def school_evidence(inst: Instance, coalition: Collection[StudentId], nu: Match, mu: Match,
                    *, efficient: bool = False) -> tuple[SchoolEvidence, ...]:
    out = []
    for s in _targets(coalition, nu):
        placed = nu.students_at(s)
        out.append(SchoolEvidence(
            school=s,
            equivalent=sets_equivalent(inst, s, placed, mu.students_at(s)),
            interrupters=interrupter_count(inst, coalition, nu, s, efficient=efficient),
            spare_seats=inst.capacity[s] - len(placed),
        ))
    return tuple(out)


def can_within_enforce(inst: Instance, coalition: Collection[StudentId], nu: Match,
                       mu: Match) -> bool:
    return all(
        ev.equivalent and ev.interrupters <= ev.spare_seats
        for ev in school_evidence(inst, coalition, nu, mu)
    )


def can_efficient_enforce(inst: Instance, coalition: Collection[StudentId], nu: Match,
                          mu: Match) -> bool:
    return all(
        ev.interrupters <= ev.spare_seats
        for ev in school_evidence(inst, coalition, nu, mu, efficient=True)
    )


_ENFORCE = {
    BlockKind.BETWEEN: can_between_enforce,
    BlockKind.WITHIN: can_within_enforce,
    BlockKind.EFFICIENT: can_efficient_enforce,
}


def blocks(inst: Instance, kind: BlockKind, coalition: Collection[StudentId], nu: Match,
           mu: Match) -> bool:
    """``coalition`` prefers ``nu`` to ``mu`` and can enforce it under ``kind``."""
    return (
        bool(coalition)
        and is_valid_match(inst, nu)
        and coalition_prefers(inst, coalition, nu, mu)
        and _ENFORCE[kind](inst, coalition, nu, mu)
    )


def certificate_holds(inst: Instance, mu: Match, cert: BlockCertificate) -> bool:
    return blocks(inst, cert.kind, cert.coalition, cert.alt_match, mu)


def _certificate(inst, kind, coalition, nu, mu) -> BlockCertificate:
    return BlockCertificate(
        kind=kind,
        coalition=frozenset(coalition),
        alt_match=nu,
        evidence=school_evidence(inst, coalition, nu, mu,
                                 efficient=kind is BlockKind.EFFICIENT),
    )


def find_between_block(inst: Instance, mu: Match) -> Optional[BlockCertificate]:
    """Pairwise search for a between-group block.

    A blocking coalition always contains a member who blocks alone, so
    checking single students against single schools is exact.
    """
    for i in inst.students:
        current = mu[i]
        if inst.pref_key(i, UNMATCHED) < inst.pref_key(i, current):
            nu = mu.with_changes({i: UNMATCHED})
            return _certificate(inst, BlockKind.BETWEEN, {i}, nu, mu)
        for s in inst.prefs[i]:
            if inst.pref_key(i, s) >= inst.pref_key(i, current):
                break
            occupants = mu.students_at(s)
            if len(occupants) < inst.capacity[s]:
                nu = mu.with_changes({i: s})
                return _certificate(inst, BlockKind.BETWEEN, {i}, nu, mu)
            outranked = [j for j in occupants if inst.group(s, i) < inst.group(s, j)]
            if outranked:
                j = max(outranked, key=lambda j: (inst.group(s, j), inst.within_pos(s, j)))
                nu = mu.with_changes({i: s, j: UNMATCHED})
                return _certificate(inst, BlockKind.BETWEEN, {i}, nu, mu)
    return None


def fairness_violations(inst: Instance, mu: Match) -> list[tuple[StudentId, Assignment]]:
    """All ``(student, school)`` pairs at which ``mu`` is unfair.

    A student who holds an unacceptable school is reported with
    ``UNMATCHED``. Otherwise ``(i, s)`` means ``i`` prefers ``s`` to their
    assignment and ``s`` has a vacancy or holds someone below ``i`` in its
    within-group order.
    """
    out = []
    for i in inst.students:
        current = mu[i]
        if inst.pref_key(i, UNMATCHED) < inst.pref_key(i, current):
            out.append((i, UNMATCHED))
            continue
        for s in inst.prefs[i]:
            if inst.pref_key(i, s) >= inst.pref_key(i, current):
                break
            occupants = mu.students_at(s)
            if len(occupants) < inst.capacity[s] or any(
                inst.within_pos(s, i) < inst.within_pos(s, j) for j in occupants
            ):
                out.append((i, s))
    return out


def is_fair(inst: Instance, mu: Match) -> bool:
    return not fairness_violations(inst, mu)


class _CoalitionSearch:
    """Depth-first search over coalitions and their members' new schools.

    Students are decided one at a time: either left out of the coalition or
    placed in it with a school (or no school) they weakly prefer to their
    current one. Outsiders are resolved at the leaves: under within-group
    enforcement they must refill every school the coalition enters to its
    original group counts, which is a bipartite matching problem; under
    efficient enforcement they simply stay away from those schools.
    """

    def __init__(self, inst: Instance, mu: Match, efficient: bool, budget: int):
        self.inst = inst
        self.mu = mu
        self.efficient = efficient
        self.budget = budget
        self.nodes = 0
        self.students = list(inst.students)
        self.held = {s: mu.students_at(s) for s in inst.school_ids}
        self.held_groups = {s: group_counts(inst, s, self.held[s]) for s in inst.school_ids}

        self.options: dict[StudentId, list[tuple[Assignment, bool]]] = {}
        for i in self.students:
            own = inst.pref_key(i, mu[i])
            opts = []
            for t in (*inst.prefs[i], UNMATCHED):
                key = inst.pref_key(i, t)
                if key > own:
                    continue
                if not efficient and t is not UNMATCHED:
                    if self.held_groups[t][inst.group(t, i)] == 0:
                        continue
                opts.append((t, key < own))
            if mu[i] not in [t for t, _ in opts]:
                # staying on an unacceptable school
                opts.append((mu[i], False))
            self.options[i] = opts
        # others whose presence outside the coalition interrupts i at s
        contour = upper_contour_efficient if efficient else upper_contour_within
        self.rivals = {
            (s, i): contour(inst, s, i) - {i}
            for i in self.students for s, _ in self.options[i] if s is not UNMATCHED
        }
        self.strict_later = [False] * (len(self.students) + 1)
        for k in range(len(self.students) - 1, -1, -1):
            self.strict_later[k] = self.strict_later[k + 1] or any(
                strict for _, strict in self.options[self.students[k]])

    def spare(self, s: SchoolId, placed: int) -> int:
        if self.efficient:
            return self.inst.capacity[s] - placed
        return self.inst.capacity[s] - len(self.held[s])

    def run(self) -> Optional[tuple[frozenset[StudentId], Match]]:
        self.nu: dict[StudentId, Assignment] = {}
        self.out: set[StudentId] = set()
        self.at: dict[SchoolId, list[StudentId]] = {}
        self.load: Counter = Counter()  # (school, group) -> members placed
        self.lower: Counter = Counter()  # school -> interrupters already certain
        return self._visit(0, False)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)

    def _visit(self, k: int, strict: bool):
        self._tick()
        if not strict and not self.strict_later[k]:
            return None
        if k == len(self.students):
            return self._leaf()
        i = self.students[k]
        inst = self.inst

        for t, is_strict in self.options[i]:
            if t is UNMATCHED:
                self.nu[i] = t
                found = self._visit(k + 1, strict or is_strict)
                del self.nu[i]
                if found:
                    return found
                continue
            g = inst.group(t, i)
            if not self.efficient and self.load[t, g] >= self.held_groups[t][g]:
                continue
            placed = len(self.at.get(t, ())) + 1
            if placed > inst.capacity[t]:
                continue
            extra = len(self.rivals[t, i] & self.out)
            if self.lower[t] + extra > self.spare(t, placed):
                continue
            self.nu[i] = t
            self.at.setdefault(t, []).append(i)
            self.load[t, g] += 1
            self.lower[t] += extra
            found = self._visit(k + 1, strict or is_strict)
            self.lower[t] -= extra
            self.load[t, g] -= 1
            self.at[t].pop()
            del self.nu[i]
            if found:
                return found

        # leave i out of the coalition
        hit = Counter()
        for j, s in self.nu.items():
            if s is not UNMATCHED and i in self.rivals[s, j]:
                hit[s] += 1
        if all(self.lower[s] + n <= self.spare(s, len(self.at[s])) for s, n in hit.items()):
            self.out.add(i)
            for s, n in hit.items():
                self.lower[s] += n
            found = self._visit(k + 1, strict)
            for s, n in hit.items():
                self.lower[s] -= n
            self.out.discard(i)
            if found:
                return found
        return None

    def _leaf(self):
        coalition = frozenset(self.nu)
        schools = [s for s, members in self.at.items() if members]
        outsiders = [o for o in self.students if o not in coalition]
        moved: dict[StudentId, SchoolId] = {}
        if not self.efficient:
            moved = self._refill(schools, outsiders)
            if moved is None:
                return None
        entered = set(schools)
        assignment = {}
        for i in self.students:
            if i in coalition:
                assignment[i] = self.nu[i]
            elif i in moved:
                assignment[i] = moved[i]
            elif self.mu[i] in entered:
                assignment[i] = UNMATCHED
            else:
                assignment[i] = self.mu[i]
        return coalition, Match(assignment)

    def _refill(self, schools, outsiders) -> Optional[dict[StudentId, SchoolId]]:
        inst = self.inst
        slots = []
        for s in schools:
            for g, need in self.held_groups[s].items():
                slots.extend((s, g, n) for n in range(need - self.load[s, g]))
        if not slots:
            return {}
        # fast path: the outsiders already seated there suffice
        in_place: dict[tuple[SchoolId, int], list[StudentId]] = {}
        for o in outsiders:
            s = self.mu[o]
            if s in self.held_groups:
                in_place.setdefault((s, inst.group(s, o)), []).append(o)
        need = Counter((s, g) for s, g, _ in slots)
        if all(len(in_place.get(key, ())) >= n for key, n in need.items()):
            return {o: key[0] for key, n in need.items() for o in in_place[key][:n]}

        graph = nx.Graph()
        graph.add_nodes_from(slots, bipartite=0)
        graph.add_nodes_from((("o", o) for o in outsiders), bipartite=1)
        for s, g, n in slots:
            for o in outsiders:
                if inst.group(s, o) == g:
                    graph.add_edge((s, g, n), ("o", o))
        matching = hopcroft_karp_matching(graph, top_nodes=slots)
        if not all(slot in matching for slot in slots):
            return None
        return {matching[slot][1]: slot[0] for slot in slots}


def _exhaustive(inst, mu, budget, kind) -> Optional[BlockCertificate]:
    search = _CoalitionSearch(inst, mu, efficient=kind is BlockKind.EFFICIENT, budget=budget)
    found = search.run()
    if found is None:
        return None
    coalition, nu = found
    return _certificate(inst, kind, coalition, nu, mu)


def find_within_block_exhaustive(inst: Instance, mu: Match,
                                 budget: int = DEFAULT_BUDGET) -> Optional[BlockCertificate]:
    """Search every coalition and alternative match for a within-group block.

    Students outside the coalition may be placed anywhere in the alternative
    match; they are chosen to restore each entered school's group counts.
    """
    return _exhaustive(inst, mu, budget, BlockKind.WITHIN)


def find_efficient_block_exhaustive(inst: Instance, mu: Match,
                                    budget: int = DEFAULT_BUDGET) -> Optional[BlockCertificate]:
    return _exhaustive(inst, mu, budget, BlockKind.EFFICIENT)


def is_in_unified_core(inst: Instance, mu: Match, budget: int = DEFAULT_BUDGET) -> CoreVerdict:
    cert = find_between_block(inst, mu)
    if cert is None:
        try:
            cert = find_within_block_exhaustive(inst, mu, budget)
        except BudgetExceeded:
            return CoreVerdict(Membership.UNKNOWN)
    if cert is None:
        return CoreVerdict(Membership.IN)
    return CoreVerdict(Membership.OUT, cert)


def is_in_efficient_core(inst: Instance, mu: Match, budget: int = DEFAULT_BUDGET) -> CoreVerdict:
    try:
        cert = find_efficient_block_exhaustive(inst, mu, budget)
    except BudgetExceeded:
        return CoreVerdict(Membership.UNKNOWN)
    if cert is None:
        return CoreVerdict(Membership.IN)
    return CoreVerdict(Membership.OUT, cert)


def find_pareto_improvement(inst: Instance, mu: Match,
                            budget: int = DEFAULT_BUDGET) -> Optional[Match]:
    """A match every student weakly prefers to ``mu`` and some strictly, if one exists."""
    students = list(inst.students)
    options = []
    for i in students:
        own = inst.pref_key(i, mu[i])
        opts = [(t, inst.pref_key(i, t) < own)
                for t in (*inst.prefs[i], UNMATCHED) if inst.pref_key(i, t) <= own]
        if mu[i] not in [t for t, _ in opts]:
            opts.append((mu[i], False))
        options.append(opts)
    strict_later = [False] * (len(students) + 1)
    for k in range(len(students) - 1, -1, -1):
        strict_later[k] = strict_later[k + 1] or any(st for _, st in options[k])

    load: Counter = Counter()
    chosen: list[Assignment] = []
    nodes = 0

    def visit(k: int, strict: bool) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(budget)
        if not strict and not strict_later[k]:
            return False
        if k == len(students):
            return True
        for t, st in options[k]:
            if t is not UNMATCHED and load[t] >= inst.capacity[t]:
                continue
            load[t] += 1
            chosen.append(t)
            if visit(k + 1, strict or st):
                return True
            chosen.pop()
            load[t] -= 1
        return False

    if visit(0, False):
        return Match(dict(zip(students, chosen)))
    return None


def is_pareto_efficient_students(inst: Instance, mu: Match,
                                 budget: int = DEFAULT_BUDGET) -> bool:
    return find_pareto_improvement(inst, mu, budget) is None


def certificate_members(cert: BlockCertificate, inst: Instance) -> list[StudentId]:
    """Coalition members in canonical student order."""
    return [i for i in inst.students if i in cert.coalition]
