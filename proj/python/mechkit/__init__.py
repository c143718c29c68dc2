"""Feasibility-constrained allocation mechanisms.

Tables are lists of allocations in profile-index order: profiles are indexed
mixed-radix over per-agent preference indices with agent 0 most significant,
and preference index p is the p-th of the m! rankings in lexicographic order.
"""

from ._mechkit import (
    ArgumentError,
    BudgetError,
    Constraint,
    builtin,
    check,
    decompose,
    gsd,
    gsds,
    local_dictatorships,
    search,
    serial_dictatorship,
)

__all__ = [
    "ArgumentError",
    "BudgetError",
    "Constraint",
    "builtin",
    "check",
    "decompose",
    "gsd",
    "gsds",
    "local_dictatorships",
    "search",
    "serial_dictatorship",
]
