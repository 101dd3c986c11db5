"""The two-stage mechanism and summary statistics comparing its stages."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .core import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    find_pareto_improvement,
    is_fair,
    is_in_efficient_core,
    is_in_unified_core,
)
from .da import DaTrace, run_da
from .model import UNMATCHED, Instance, Match, student_rank
from .ttc import TtcTrace, run_ttc


@dataclass
class PipelineResult:
    stage1: Match
    stage2: Match
    da_trace: DaTrace
    ttc_trace: TtcTrace


def run_pipeline(inst: Instance) -> PipelineResult:
    """Deferred acceptance, then trading within priority groups."""
    mu1, da_trace = run_da(inst)
    mu2, ttc_trace = run_ttc(inst, mu1)
    return PipelineResult(mu1, mu2, da_trace, ttc_trace)


@dataclass
class MechanismSummary:
    name: str
    ranks: dict[str, int]  # "1", "2", ... and "unmatched" -> number of students
    unmatched: int
    improved: int
    verdicts: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mechanism": self.name,
            "rank_histogram": dict(self.ranks),
            "unmatched": self.unmatched,
            "improved_by_stage2": self.improved,
            "verdicts": dict(self.verdicts),
        }


@dataclass
class ComparisonReport:
    mechanisms: list[MechanismSummary]

    def __getitem__(self, name: str) -> MechanismSummary:
        return next(m for m in self.mechanisms if m.name == name)

    def to_dict(self) -> dict:
        return {"mechanisms": [m.to_dict() for m in self.mechanisms]}

    def render(self) -> str:
        lines = []
        for m in self.mechanisms:
            hist = ", ".join(f"{k}: {v}" for k, v in m.ranks.items())
            lines.append(f"{m.name}: ranks {{{hist}}}; unmatched {m.unmatched}; "
                         f"improved by stage 2 {m.improved}")
            lines.append("  " + ", ".join(f"{k} {v}" for k, v in m.verdicts.items()))
        return "\n".join(lines)


def _histogram(inst: Instance, m: Match) -> dict[str, int]:
    counts = Counter(student_rank(inst, i, m) for i in inst.students)
    out = {str(r): counts[r] for r in sorted(r for r in counts if r is not UNMATCHED)}
    out["unmatched"] = counts[UNMATCHED]
    return out


def _verdicts(inst: Instance, m: Match, budget: int) -> dict[str, str]:
    out = {
        "unified": is_in_unified_core(inst, m, budget).status.value,
        "fair": "IN" if is_fair(inst, m) else "OUT",
        "efficient": is_in_efficient_core(inst, m, budget).status.value,
    }
    try:
        out["pareto"] = "IN" if find_pareto_improvement(inst, m, budget) is None else "OUT"
    except BudgetExceeded:
        out["pareto"] = "UNKNOWN"
    return out


def compare_report(inst: Instance, budget: int = DEFAULT_BUDGET) -> ComparisonReport:
    """Rank statistics and core verdicts for the first stage alone and for both stages."""
    result = run_pipeline(inst)
    improved = sum(
        inst.pref_key(i, result.stage2[i]) < inst.pref_key(i, result.stage1[i])
        for i in inst.students
    )
    return ComparisonReport([
        MechanismSummary("DA", _histogram(inst, result.stage1),
                         sum(result.stage1[i] is UNMATCHED for i in inst.students), 0,
                         _verdicts(inst, result.stage1, budget)),
        MechanismSummary("DA-TTC", _histogram(inst, result.stage2),
                         sum(result.stage2[i] is UNMATCHED for i in inst.students), improved,
                         _verdicts(inst, result.stage2, budget)),
    ])
