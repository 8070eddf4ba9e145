"""Budgeted execution of one job with checkpoint snapshots."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from pathlib import Path

from hybridmoea.benchmarks import get_problem
from hybridmoea.core import BudgetMeter, BudgetMode, genotypes_of, objectives_of
from hybridmoea.hybrid import Driver, Proxy, compose
from hybridmoea.simulation.config import RunConfig
from hybridmoea.simulation.jobs import SimulationJob
from hybridmoea.simulation.persistence import ResultChunk, persist_chunk

log = logging.getLogger(__name__)


def run_job(
    job: SimulationJob,
    config: RunConfig | None = None,
    output_root: str | Path | None = None,
    fmt: str = "pickle",
    on_step: Callable[[Driver, Proxy, BudgetMeter], None] | None = None,
) -> list[ResultChunk]:
    """Run ``job`` to its last checkpoint, persisting one chunk per checkpoint.

    The outermost driver is stepped while the budget consumed is below the
    next checkpoint. A step is never interrupted, so a chunk's ``consumed``
    can exceed its checkpoint by less than one outermost step. In STEPS mode
    every outermost step costs one unit.

    With ``output_root=None`` nothing is written and the chunks are only
    returned.
    """
    problem = get_problem(job.problem)
    meter = BudgetMeter(job.budgets[-1], job.budget_mode)
    driver = compose(job.chain, problem, config, meter, job.seed)
    start = time.perf_counter()
    chunks = []
    for checkpoint in job.budgets:
        while meter.consumed < checkpoint:
            proxy = driver.step()
            if job.budget_mode is BudgetMode.STEPS:
                meter.charge_step()
            if on_step is not None:
                on_step(driver, proxy, meter)
        pop = driver.result()
        chunk = ResultChunk(
            problem=problem.name,
            chain=job.chain,
            run=job.run_index,
            checkpoint=checkpoint,
            consumed=meter.consumed,
            seed=job.seed,
            genotypes=genotypes_of(pop).reshape(len(pop), problem.dimension),
            objectives=objectives_of(pop).reshape(len(pop), problem.objective_count),
            wall_time_seconds=time.perf_counter() - start,
        )
        if output_root is not None:
            persist_chunk(chunk, output_root, fmt)
        chunks.append(chunk)
        log.debug("%s: checkpoint %d reached at %d", job.describe(), checkpoint, meter.consumed)
    driver.finalize()
    return chunks
