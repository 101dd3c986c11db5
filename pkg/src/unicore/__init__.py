"""Two-stage school choice matching with between-group and within-group priorities."""
from .core import (
    BlockCertificate,
    BlockKind,
    BudgetExceeded,
    CoreVerdict,
    Membership,
    can_between_enforce,
    can_efficient_enforce,
    can_within_enforce,
    coalition_prefers,
    fairness_violations,
    find_between_block,
    find_efficient_block_exhaustive,
    find_pareto_improvement,
    find_within_block_exhaustive,
    is_fair,
    is_in_efficient_core,
    is_in_unified_core,
    is_pareto_efficient_students,
)
from .da import run_da
from .examples import load_instance, load_match
from .model import (
    UNMATCHED,
    Instance,
    InvalidInstance,
    Match,
    is_individually_rational,
    is_valid_match,
    student_rank,
    validate_instance,
)
from .pipeline import compare_report, run_pipeline
from .ttc import run_ttc

__all__ = [
    "BlockCertificate", "BlockKind", "BudgetExceeded", "CoreVerdict", "Instance",
    "InvalidInstance", "Match", "Membership", "UNMATCHED", "can_between_enforce",
    "can_efficient_enforce", "can_within_enforce", "coalition_prefers", "compare_report",
    "fairness_violations", "find_between_block", "find_efficient_block_exhaustive",
    "find_pareto_improvement", "find_within_block_exhaustive", "is_fair",
    "is_in_efficient_core", "is_in_unified_core", "is_individually_rational",
    "is_pareto_efficient_students", "is_valid_match", "load_instance", "load_match",
    "run_da", "run_pipeline", "run_ttc", "student_rank", "validate_instance",
]
