"""Tools for the cototient equation n - phi(n) = c.

Exact per-c solving and brute-force sweeps, Goldbach counts, vectorized
range scans, balanced factor splits, and integer point-line incidence
configurations with their divisor-class decomposition.
"""

from .arith import (
    BUILTIN_FUNCTIONS,
    FactorTable,
    Factorization,
    IDENTITY,
    MultiplicativeFunction,
    ResourceLimitError,
    SIGMA,
    TAU,
    TOTIENT,
    build_factor_table,
    cototient,
    divisor_count,
    divisors,
    euler_phi,
    factorize,
    is_prime,
)
from .diffscan import (
    ConditionReport,
    DifferenceInstance,
    check_conditions,
    difference_instance,
    scan_difference,
    smoothness_filter,
    solutions_to_configuration,
)
from .equation import (
    SolutionRecord,
    classify,
    goldbach_count,
    goldbach_pairs,
    prime_power_solutions,
    solution_record,
    solutions_with_cofactor,
    solve,
    sweep_solutions,
)
from .geometry import (
    Configuration,
    DivisorClass,
    IncidenceGraph,
    decompose,
    find_cycle,
    incidence_graph,
    is_incident,
    is_prime_configuration,
    load_configuration,
    random_prime_configuration,
    save_configuration,
    verify_incidence_bound,
)
from .partition import SplitResult, balanced_split
from .scan import ScanRow, ScanSummary, scan

__version__ = "0.1.0"
