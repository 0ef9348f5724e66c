"""Approval-based budgeting: rules, exact and greedy solvers, axiom audits and experiments."""

__version__ = "0.1.0"
