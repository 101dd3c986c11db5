"""Student-proposing deferred acceptance on the within-group priorities."""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import UNMATCHED, Assignment, Instance, Match, SchoolId, StudentId


@dataclass
class DaRound:
    # student -> school proposed to this round (UNMATCHED once their list is exhausted)
    proposals: dict[StudentId, Assignment]
    rejections: set[tuple[SchoolId, StudentId]] = field(default_factory=set)


@dataclass
class DaTrace:
    rounds: list[DaRound] = field(default_factory=list)

    def report(self) -> str:
        lines = []
        for k, rnd in enumerate(self.rounds, 1):
            props = ", ".join(f"{i}->{'-' if s is UNMATCHED else s}"
                              for i, s in rnd.proposals.items())
            lines.append(f"DA round {k}: proposals {props or '(none)'}")
            if rnd.rejections:
                rej = ", ".join(f"{s} rejects {i}" for s, i in sorted(rnd.rejections))
                lines.append(f"DA round {k}: {rej}")
        return "\n".join(lines)

    def to_dict(self) -> list[dict]:
        return [
            {
                "round": k,
                "proposals": dict(rnd.proposals),
                "rejections": [list(p) for p in sorted(rnd.rejections)],
            }
            for k, rnd in enumerate(self.rounds, 1)
        ]


def run_da(inst: Instance) -> tuple[Match, DaTrace]:
    """Run deferred acceptance with simultaneous proposals.

    Each round every student without a tentative seat proposes to the best
    school on their list that has not rejected them yet (or stays unmatched
    once the list is used up). Each school keeps the top ``capacity``
    applicants by within-group priority among those it holds and the new
    proposers, and rejects the rest.
    """
    next_choice = {i: 0 for i in inst.students}
    held: dict[SchoolId, list[StudentId]] = {s: [] for s in inst.school_ids}
    result: dict[StudentId, Assignment] = {}
    trace = DaTrace()
    free = list(inst.students)
    order = {i: k for k, i in enumerate(inst.students)}

    while free:
        rnd = DaRound(proposals={})
        applicants: dict[SchoolId, list[StudentId]] = {}
        for i in free:
            ranked = inst.prefs[i]
            if next_choice[i] < len(ranked):
                s = ranked[next_choice[i]]
                rnd.proposals[i] = s
                applicants.setdefault(s, []).append(i)
            else:
                rnd.proposals[i] = UNMATCHED
                result[i] = UNMATCHED
        free = []
        for s, new in applicants.items():
            pool = sorted(held[s] + new, key=lambda j: inst.within_pos(s, j))
            q = inst.capacity[s]
            held[s] = pool[:q]
            for j in pool[q:]:
                rnd.rejections.add((s, j))
                next_choice[j] += 1
                free.append(j)
        trace.rounds.append(rnd)
        free.sort(key=order.__getitem__)

    for s, students in held.items():
        for i in students:
            result[i] = s
    return Match({i: result[i] for i in inst.students}), trace
