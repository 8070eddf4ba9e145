"""Composable multi-objective evolutionary algorithms.

Single-deme drivers (NSGA-II, SPEA2, OMOPSO) and multi-deme meta-models (HGS,
IMGA) share one step/proxy contract, so chains such as ``IMGA+HGS+NSGAII``
compose freely.
"""

from hybridmoea import drivers, metamodels  # noqa: F401  (fills the registry)
from hybridmoea.chain import AlgorithmChain
from hybridmoea.core import (
    BudgetMeter,
    BudgetMode,
    ConfigurationError,
    ContractViolation,
    DomainError,
    Individual,
    Problem,
    clip_to_bounds,
    dominates,
    evaluate,
    evaluate_all,
    nondominated_filter,
)
from hybridmoea.hybrid import REGISTRY, Driver, MetaModel, Proxy, compose, register

__version__ = "0.1.0"

__all__ = [
    "AlgorithmChain",
    "BudgetMeter",
    "BudgetMode",
    "ConfigurationError",
    "ContractViolation",
    "DomainError",
    "Driver",
    "Individual",
    "MetaModel",
    "Problem",
    "Proxy",
    "REGISTRY",
    "clip_to_bounds",
    "compose",
    "dominates",
    "evaluate",
    "evaluate_all",
    "nondominated_filter",
    "register",
]
