from ._sosggm import (
    check_consistency,
    classify_region,
    count_solutions,
    critical_values,
    marginal_error,
    mixed_table,
    normalisability,
    pinned_table,
    psi,
    scan,
    solve,
    solve_field,
    solve_k3,
    verify,
)

__all__ = [
    "check_consistency",
    "classify_region",
    "count_solutions",
    "critical_values",
    "marginal_error",
    "mixed_table",
    "normalisability",
    "pinned_table",
    "psi",
    "scan",
    "solve",
    "solve_field",
    "solve_k3",
    "verify",
]
