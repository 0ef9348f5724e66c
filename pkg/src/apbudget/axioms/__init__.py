"""Cost-related axioms: perturbations, checks, counterexample fixtures and the audit."""

from apbudget.axioms.audit import (
    TABLE1,
    TABLE_AXIOMS,
    AuditReport,
    audit_cell,
    audit_matrix,
    random_scenario,
    read_witness,
    render_matrix,
    witness_text,
    write_witness,
)
from apbudget.axioms.checks import (
    AxiomId,
    AxiomVerdict,
    NoViolationFound,
    Perturbation,
    Violated,
    Witness,
    apply_merge,
    apply_split,
    check,
    check_budget_mono,
    check_discount_mono,
    check_limit_mono,
    check_merging_mono,
    check_splitting_mono,
)
from apbudget.axioms.fixtures import FIXTURES, Fixture, fixtures_for

__all__ = [
    "FIXTURES",
    "TABLE1",
    "TABLE_AXIOMS",
    "AuditReport",
    "AxiomId",
    "AxiomVerdict",
    "Fixture",
    "NoViolationFound",
    "Perturbation",
    "Violated",
    "Witness",
    "apply_merge",
    "apply_split",
    "audit_cell",
    "audit_matrix",
    "check",
    "check_budget_mono",
    "check_discount_mono",
    "check_limit_mono",
    "check_merging_mono",
    "check_splitting_mono",
    "fixtures_for",
    "random_scenario",
    "read_witness",
    "render_matrix",
    "witness_text",
    "write_witness",
]
