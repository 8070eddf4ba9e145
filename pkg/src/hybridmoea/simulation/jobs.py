"""Simulation jobs: (budget checkpoints, chain, problem, run) tuples."""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from hybridmoea.chain import AlgorithmChain
from hybridmoea.core import BudgetMode


def validate_budgets(budgets: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(b) for b in budgets)
    if not out:
        raise ValueError("at least one budget checkpoint is required")
    if out[0] <= 0:
        raise ValueError(f"budget checkpoints must be positive, got {out[0]}")
    for prev, cur in zip(out, out[1:]):
        if cur <= prev:
            raise ValueError(f"budget checkpoints must be strictly increasing: {prev} then {cur}")
    return out


def job_seed(seed_base: int, chain: str, problem: str, run_index: int) -> int:
    """Stable 63-bit seed; independent of process and hash randomization."""
    key = f"{seed_base}|{chain}|{problem}|{run_index}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big") >> 1


@dataclass(frozen=True)
class SimulationJob:
    budgets: tuple[int, ...]
    chain: str
    problem: str
    run_index: int
    seed: int
    budget_mode: BudgetMode = BudgetMode.FITNESS_CALLS

    def __post_init__(self) -> None:
        object.__setattr__(self, "budgets", validate_budgets(self.budgets))
        object.__setattr__(self, "chain", str(AlgorithmChain.parse(self.chain)))
        object.__setattr__(self, "budget_mode", BudgetMode(self.budget_mode))

    def describe(self) -> str:
        return f"{self.chain} on {self.problem} run {self.run_index}"


def expand_jobs(
    budgets: Sequence[int],
    chains: Sequence[str],
    problems: Sequence[str],
    repeats: int = 1,
    seed_base: int = 0,
    budget_mode: BudgetMode = BudgetMode.FITNESS_CALLS,
) -> list[SimulationJob]:
    """Every chain on every problem, ``repeats`` times, sharing one budget list."""
    if not chains:
        raise ValueError("no algorithm chains given")
    if not problems:
        raise ValueError("no problems given")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    budgets = validate_budgets(budgets)
    jobs = []
    for chain in chains:
        chain = str(AlgorithmChain.parse(chain))
        for problem in problems:
            for run in range(repeats):
                jobs.append(SimulationJob(budgets, chain, problem, run, job_seed(seed_base, chain, problem, run), budget_mode))
    return jobs
