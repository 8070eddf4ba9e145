"""Problems, individuals, Pareto dominance and budget-metered evaluation."""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hybridmoea import kernels


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """Unknown token or inconsistent configuration."""


def _frozen(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Individual:
    """A real-coded genotype with its (lazily computed) objective vector.

    Instances are immutable; evaluation returns a new ``Individual`` carrying
    the same genotype array.
    """

    genotype: np.ndarray
    objectives: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.genotype, np.ndarray) and not self.genotype.flags.writeable):
            object.__setattr__(self, "genotype", _frozen(self.genotype))
        if self.objectives is not None and self.objectives.flags.writeable:
            object.__setattr__(self, "objectives", _frozen(self.objectives))

    @property
    def evaluated(self) -> bool:
        return self.objectives is not None

    def __repr__(self) -> str:
        obj = None if self.objectives is None else np.round(self.objectives, 6).tolist()
        return f"Individual(dim={self.genotype.size}, objectives={obj})"


Population = list[Individual]


@dataclass(frozen=True, eq=False)
class Problem:
    """A box-constrained multi-objective minimization problem.

    ``function`` maps a ``(n, dimension)`` array of genotypes to a
    ``(n, objective_count)`` array of objectives, row by row. It must be pure.
    """

    name: str
    dimension: int
    objective_count: int
    lower: np.ndarray
    upper: np.ndarray
    function: Callable[[np.ndarray], np.ndarray]
    front: Callable[[int], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        lower = _frozen(np.broadcast_to(self.lower, (self.dimension,)))
        upper = _frozen(np.broadcast_to(self.upper, (self.dimension,)))
        if self.dimension < 1 or self.objective_count < 1:
            raise ConfigurationError("dimension and objective_count must be positive")
        if not np.all(lower < upper):
            raise ConfigurationError(f"{self.name}: every lower bound must be below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.width))

    def in_bounds(self, genotypes) -> np.ndarray:
        X = np.atleast_2d(genotypes)
        return np.all((X >= self.lower) & (X <= self.upper), axis=1)

    def __call__(self, genotypes) -> np.ndarray:
        """Evaluate without budget accounting. Checks bounds and finiteness."""
        X = np.atleast_2d(np.asarray(genotypes, dtype=np.float64))
        if X.shape[1] != self.dimension:
            raise ContractViolation(f"{self.name}: expected {self.dimension} variables, got {X.shape[1]}")
        bad = ~self.in_bounds(X)
        if bad.any():
            raise DomainError(f"{self.name}: genotype outside bounds at row {int(np.argmax(bad))}")
        F = np.asarray(self.function(X), dtype=np.float64).reshape(X.shape[0], self.objective_count)
        if not np.all(np.isfinite(F)):
            raise DomainError(f"{self.name}: non-finite objective value")
        return F

    def reference_front(self, point_count: int = 1000) -> np.ndarray | None:
        return None if self.front is None else self.front(point_count)

    def random_individuals(self, count: int, rng: np.random.Generator) -> Population:
        X = rng.uniform(self.lower, self.upper, size=(count, self.dimension))
        return [Individual(x) for x in X]


class BudgetMode(enum.Enum):
    FITNESS_CALLS = "calls"
    STEPS = "steps"


class BudgetMeter:
    """Counts spent budget for one simulation job.

    ``evaluations`` always counts first-time fitness evaluations. ``consumed``
    is the budget measure: identical to ``evaluations`` in FITNESS_CALLS mode,
    and the number of charged outermost steps in STEPS mode.

    The meter never stops an evaluation. Once ``consumed >= limit`` the meter
    reports :attr:`exhausted` and callers finish their current step.
    """

    def __init__(self, limit: int, mode: BudgetMode = BudgetMode.FITNESS_CALLS) -> None:
        if limit < 0:
            raise ContractViolation("budget limit must be nonnegative")
        self.limit = int(limit)
        self.mode = BudgetMode(mode)
        self.evaluations = 0
        self._steps = 0

    @property
    def consumed(self) -> int:
        return self.evaluations if self.mode is BudgetMode.FITNESS_CALLS else self._steps

    @property
    def exhausted(self) -> bool:
        return self.consumed >= self.limit

    def charge_evaluations(self, count: int) -> None:
        self.evaluations += int(count)

    def charge_step(self) -> None:
        self._steps += 1

    def __repr__(self) -> str:
        return f"BudgetMeter(limit={self.limit}, consumed={self.consumed}, mode={self.mode.value})"


# ---------------------------------------------------------------------------
# dominance
# ---------------------------------------------------------------------------


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractViolation(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def objectives_of(pop: Sequence[Individual]) -> np.ndarray:
    """Stack the objective vectors of an evaluated population."""
    if not pop:
        return np.empty((0, 0))
    for ind in pop:
        if ind.objectives is None:
            raise ContractViolation("population contains an unevaluated individual")
    return np.stack([ind.objectives for ind in pop])


def genotypes_of(pop: Sequence[Individual]) -> np.ndarray:
    if not pop:
        return np.empty((0, 0))
    return np.stack([ind.genotype for ind in pop])


def nondominated_filter(pop: Sequence[Individual]) -> Population:
    """Members not dominated by any other member, in input order.

    Duplicates in objective space are all kept.
    """
    if not pop:
        return []
    mask = kernels.nondominated_mask(objectives_of(pop))
    return [ind for ind, keep in zip(pop, mask) if keep]


def clip_to_bounds(problem: Problem, genotype) -> np.ndarray:
    g = np.asarray(genotype, dtype=np.float64)
    if g.shape[-1] != problem.dimension:
        raise ContractViolation(f"expected {problem.dimension} variables, got {g.shape[-1]}")
    return np.clip(g, problem.lower, problem.upper)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(problem: Problem, ind: Individual, meter: BudgetMeter) -> Individual:
    """Evaluate one individual, billing ``meter`` for first-time evaluations.

    Already-evaluated individuals are returned as-is at no cost. A meter that
    is already exhausted does not prevent the evaluation; check
    ``meter.exhausted`` afterwards.
    """
    if ind.objectives is not None:
        return ind
    F = problem(ind.genotype)
    meter.charge_evaluations(1)
    return Individual(ind.genotype, F[0])


def evaluate_all(problem: Problem, pop: Iterable[Individual], meter: BudgetMeter) -> Population:
    """Batch version of :func:`evaluate`; order is preserved."""
    pop = list(pop)
    todo = [i for i, ind in enumerate(pop) if ind.objectives is None]
    if not todo:
        return pop
    F = problem(np.stack([pop[i].genotype for i in todo]))
    meter.charge_evaluations(len(todo))
    out = list(pop)
    for row, i in enumerate(todo):
        out[i] = Individual(pop[i].genotype, F[row])
    return out
