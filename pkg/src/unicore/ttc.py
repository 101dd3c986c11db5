"""Top trading cycles over the seats of a fair baseline match.

Only students in the lowest priority group among their school's occupants
take part, and a student may only bid for a seat held by an active student
of their own priority group at that school. Unmatched students own no seat
and never trade.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import UNMATCHED, Assignment, Instance, Match, SchoolId, StudentId


@dataclass
class TtcState:
    base: Match
    active_students: set[StudentId]
    active_schools: set[SchoolId]
    assignment: dict[StudentId, Assignment]
    round: int = 0


@dataclass
class TtcTrace:
    # each round: the cycles executed, as (student, school received) pairs in cycle order
    rounds: list[list[tuple[tuple[StudentId, SchoolId], ...]]] = field(default_factory=list)

    @property
    def trades(self) -> list[tuple[tuple[StudentId, SchoolId], ...]]:
        """Cycles that move at least one student (length one cycles keep the own seat)."""
        return [c for rnd in self.rounds for c in rnd if len(c) > 1]

    def report(self) -> str:
        lines = []
        for k, rnd in enumerate(self.rounds, 1):
            for cycle in rnd:
                path = " -> ".join(f"{i} -> {s}" for i, s in cycle)
                tag = "trade" if len(cycle) > 1 else "keep"
                lines.append(f"TTC round {k}: {tag}: {path} -> {cycle[0][0]}")
        return "\n".join(lines)

    def to_dict(self) -> list[dict]:
        return [
            {"round": k, "cycles": [[list(p) for p in c] for c in rnd]}
            for k, rnd in enumerate(self.rounds, 1)
        ]


def init_activation(inst: Instance, base: Match) -> TtcState:
    """Activate each matched student whose group is the lowest among their school's occupants."""
    lowest: dict[SchoolId, int] = {}
    for i, s in base.items():
        if s is not UNMATCHED:
            lowest[s] = max(lowest.get(s, -1), inst.group(s, i))
    active = {
        i for i in inst.students
        if base[i] is not UNMATCHED and inst.group(base[i], i) == lowest[base[i]]
    }
    return TtcState(
        base=base,
        active_students=active,
        active_schools={base[i] for i in active},
        assignment=dict(base.assignment),
    )


def _holders(state: TtcState) -> dict[SchoolId, list[StudentId]]:
    out: dict[SchoolId, list[StudentId]] = {s: [] for s in state.active_schools}
    for j in state.active_students:
        out[state.base[j]].append(j)
    return out


def _admissible(inst, state, i, holders) -> set[SchoolId]:
    return {
        s for s in state.active_schools
        if any(inst.group(s, j) == inst.group(s, i) for j in holders[s])
    }


def admissible_schools(inst: Instance, state: TtcState, i: StudentId) -> set[SchoolId]:
    """Active schools with an active seat holder in ``i``'s priority group there."""
    return _admissible(inst, state, i, _holders(state))


def run_ttc(inst: Instance, base: Match) -> tuple[Match, TtcTrace]:
    state = init_activation(inst, base)
    trace = TtcTrace()
    order = {i: k for k, i in enumerate(inst.students)}

    while state.active_students:
        state.round += 1
        holders = _holders(state)
        points: dict = {}
        for i in state.active_students:
            options = _admissible(inst, state, i, holders)
            points[("i", i)] = ("s", min(options, key=lambda s: inst.pref_key(i, s)))
        for s in state.active_schools:
            points[("s", s)] = ("i", min(holders[s], key=lambda j: inst.within_pos(s, j)))

        cycles = []
        seen: set = set()
        for start in sorted(state.active_students, key=order.__getitem__):
            node = ("i", start)
            path: list = []
            on_path: dict = {}
            while node not in seen and node not in on_path:
                on_path[node] = len(path)
                path.append(node)
                node = points[node]
            if node in on_path:
                loop = path[on_path[node]:]
                # rotate so the cycle starts at a student
                k = next(n for n, v in enumerate(loop) if v[0] == "i")
                loop = loop[k:] + loop[:k]
                cycles.append(tuple((loop[n][1], loop[n + 1][1]) for n in range(0, len(loop), 2)))
            seen.update(path)

        for cycle in cycles:
            for i, s in cycle:
                state.assignment[i] = s
                state.active_students.discard(i)
        state.active_schools = {state.base[j] for j in state.active_students}
        trace.rounds.append(cycles)

    return Match({i: state.assignment[i] for i in inst.students}), trace
