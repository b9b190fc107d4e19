"""
Sweep Orchestrator - Runs a parameter grid over a bounded worker pool

Points are dispatched to threads and assembled in grid order, so the output
does not depend on scheduling.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from ..circuits.angle_solver import prepare_ground_state
from ..lmg.exact_solver import exact_point
from ..models.lmg_models import LmgParams, Source, SweepConfig, SweepRow
from ..simulation.noise import NoiseModel
from ..tomography.counts_io import group_by_point
from ..tomography.estimator import CountRecord, measure_plan
from ..tomography.pauli import TomographyPlan, default_plan
from ..tomography.rdm import order_parameters_from_counts
from ..utils.config import derive_seed, get_worker_count
from ..utils.errors import ConfigError, LipkinError, SweepPointError

logger = logging.getLogger(__name__)

SIMULATED_SIZES = (3, 4)


class SweepOrchestrator:
    """
    Evaluates every grid point of a SweepConfig in its configured mode
    """

    def __init__(self, config: SweepConfig, workers: Optional[int] = None):
        self.config = config
        self.workers = workers or get_worker_count()
        self.grid: List[LmgParams] = config.model.parameter_grid()
        self.source = Source(config.mode)

    def point_seed(self, index: int) -> Optional[int]:
        """Seed of the angle solve at one point; exact points have none"""
        if self.source is Source.EXACT:
            return None
        return derive_seed(self.config.root_seed, index)

    def point_seeds(self) -> List[Dict[str, Optional[int]]]:
        return [{"index": i, "seed": self.point_seed(i)} for i in range(len(self.grid))]

    def _map(self, fn, items: Sequence) -> List:
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def run_exact(self) -> List[SweepRow]:
        logger.info("exact sweep: %d points, %d workers", len(self.grid), self.workers)
        tol = self.config.degeneracy_tol

        def evaluate(item: Tuple[int, LmgParams]) -> SweepRow:
            index, params = item
            try:
                point = exact_point(params, tol)
            except LipkinError as e:
                raise SweepPointError(index, e) from e
            return SweepRow(index=index, params=params, source=Source.EXACT, point=point)

        return self._map(evaluate, list(enumerate(self.grid)))

    def _check_simulated(self):
        n = self.config.model.n_particles
        if self.source is Source.EXACT:
            raise ConfigError("simulated sweeps need mode sim_ideal or sim_noisy", field="mode")
        if n not in SIMULATED_SIZES:
            raise ConfigError(f"simulated sweeps support n_particles in {SIMULATED_SIZES}, got {n}",
                              field="model.n_particles")

    def plan(self) -> TomographyPlan:
        return default_plan(self.config.model.n_particles, self.config.shots)

    def noise_model(self) -> Optional[NoiseModel]:
        if self.source is not Source.SIM_NOISY:
            return None
        return NoiseModel.from_section(self.config.noise, self.config.model.n_particles)

    def run_simulated(self) -> Tuple[List[SweepRow], List[CountRecord]]:
        """
        Prepare, measure and estimate every point. A point whose circuit cannot
        be prepared is kept as a failed row; the sweep goes on.
        """
        self._check_simulated()
        plan = self.plan()
        noise = self.noise_model()
        logger.info("%s sweep: %d points, %d workers", self.source.value, len(self.grid), self.workers)

        def evaluate(item: Tuple[int, LmgParams]) -> Tuple[SweepRow, List[CountRecord]]:
            index, params = item
            seed = self.point_seed(index)
            try:
                prepared = prepare_ground_state(params, seed=seed, degeneracy_tol=self.config.degeneracy_tol)
                records = measure_plan(prepared.circuit, plan, self.config.repetitions,
                                       self.config.root_seed, point_index=index, noise=noise)
                point = order_parameters_from_counts(records, plan, params, self.source, seed)
            except LipkinError as e:
                logger.warning("point %d (eps=%g, lambda=%g) failed: %s", index, params.epsilon, params.lam, e)
                return SweepRow(index=index, params=params, source=self.source, seed=seed, error=str(e)), []
            return SweepRow(index=index, params=params, source=self.source, point=point, seed=seed), records

        results = self._map(evaluate, list(enumerate(self.grid)))
        rows = [row for row, _ in results]
        records = [record for _, point_records in results for record in point_records]
        failed = sum(1 for row in rows if row.failed)
        if failed:
            logger.warning("%d of %d points failed", failed, len(rows))
        return rows, records

    def reanalyze(self, records: Sequence[CountRecord]) -> List[SweepRow]:
        """Rebuild the sweep rows from persisted counts without rerunning circuits"""
        self._check_simulated()
        plan = self.plan()
        by_point = group_by_point(records)
        unknown = sorted(set(by_point) - set(range(len(self.grid))))
        if unknown:
            raise ConfigError(f"counts reference points {unknown} outside the configured grid")

        rows = []
        for index, params in enumerate(self.grid):
            seed = self.point_seed(index)
            if index not in by_point:
                rows.append(SweepRow(index=index, params=params, source=self.source, seed=seed,
                                     error="no counts recorded"))
                continue
            point = order_parameters_from_counts(by_point[index], plan, params, self.source, seed)
            rows.append(SweepRow(index=index, params=params, source=self.source, point=point, seed=seed))
        return rows
