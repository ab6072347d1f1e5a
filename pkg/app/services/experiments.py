"""
Experiment Service

This module runs the full pipeline (index set, random nodes, subsampling,
least-squares fit, error measurement) over grids of radii and seeds, and fits
decay rates to the resulting (n, error) records.
"""
import logging
import statistics
import time
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.exceptions import GuaranteeError, ParameterError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import NATURAL_ERROR_MEASURE, NATURAL_MEASURE, BasisTag, ErrorMethod
from app.schemas.experiment import ExperimentConfig, ExperimentRecord, FrameBoundArm
from app.schemas.nodes import NodeSet
from app.services.bases import design_matrix
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.recovery import l2_error_montecarlo, l2_error_parseval, least_squares_fit
from app.services.reference_problems import B2TensorOracle, test_function
from app.services.sampling import cell_seed, draw_nodes, oversampled_budget
from app.services.subsampling import bss_subsample, frame_bounds, require_guarantee

logger = logging.getLogger(DEFAULT_LOGGER)

# Radii per dimension; m spans roughly 100 to 1500
DEFAULT_RADII: Dict[int, List[int]] = {
    1: [10, 20, 40, 80, 160],
    2: [20, 40, 60, 80, 100, 140],
    3: [10, 15, 20, 25, 30, 35, 40, 50],
    4: [5, 10, 15, 20, 25, 30],
    5: [5, 10, 15],
}

# Observed rate of the half-period cosine arm
HPC_RATE = 1.5


def reference_curve(n, d: int, s: float):
    """n^{-s} (log n)^{s (d - 1) + 1/2}"""
    n = np.asarray(n, dtype=np.float64)
    return n ** (-s) * np.log(n) ** (s * (d - 1) + 0.5)


def fit_decay_rate(
    records: Sequence[ExperimentRecord],
    n_min: Optional[float] = None,
    n_max: Optional[float] = None,
) -> float:
    """
    Least-squares slope of log(error) against log(n).

    Args:
        records: Records carrying n and error
        n_min: Smallest n to include
        n_max: Largest n to include

    Returns:
        float: Fitted slope
    """
    points = [
        (record.n, record.error)
        for record in records
        if record.error is not None and record.error > 0.0
        and (n_min is None or record.n >= n_min)
        and (n_max is None or record.n <= n_max)
    ]
    if len(points) < 4:
        raise ParameterError(f"need at least 4 records in range to fit a rate, got {len(points)}")
    n, error = np.array(points, dtype=np.float64).T
    slope, _ = np.polyfit(np.log(n), np.log(error), 1)
    return float(slope)


def aggregate_medians(records: Sequence[ExperimentRecord]) -> List[ExperimentRecord]:
    """Collapse repeats of one (d, R, basis) cell into a record of medians, sorted by n"""
    groups: Dict[Tuple, List[ExperimentRecord]] = defaultdict(list)
    for record in records:
        groups[(record.d, record.R, record.basis, record.b)].append(record)

    def median(values):
        values = [value for value in values if value is not None]
        return statistics.median(values) if values else None

    aggregated = []
    for group in groups.values():
        first = group[0]
        aggregated.append(
            first.model_copy(
                update={
                    "n": int(median(record.n for record in group)),
                    "error": median(record.error for record in group),
                    "a_before": median(record.a_before for record in group),
                    "b_before": median(record.b_before for record in group),
                    "a_after": median(record.a_after for record in group),
                    "b_after": median(record.b_after for record in group),
                    "ms": median(record.ms for record in group),
                }
            )
        )
    return sorted(aggregated, key=lambda record: (record.n, record.R))


class ExperimentRunner:
    """Runs experiment cells and collects guarantee failures"""

    def __init__(self, selection: Optional[str] = None, mc_points: Optional[int] = None):
        self.selection = selection
        self.mc_points = mc_points
        self.failures: List[dict] = []

    def _cell(
        self,
        d: int,
        R: int,
        basis: BasisTag,
        b: float,
        seed: int,
        error_method: Optional[ErrorMethod],
    ) -> Tuple[ExperimentRecord, NodeSet, NodeSet]:
        basis = BasisTag(basis)
        error_method = None if error_method is None else ErrorMethod(error_method)
        started = time.perf_counter()
        indices = enumerate_hyperbolic_cross(d, R)
        M = oversampled_budget(indices.m)
        nodes = draw_nodes(NATURAL_MEASURE[basis], d, M, seed)

        full = design_matrix(nodes, indices, basis, normalized=False)
        gram = full.entries.T @ full.entries
        before = frame_bounds(full, gram=gram)
        result = require_guarantee(bss_subsample(full, b, selection=self.selection, gram=gram))
        del full, gram

        selected = nodes.restrict(result.indices)
        after = frame_bounds(design_matrix(selected, indices, basis, normalized=True))

        error = None
        if error_method is not None:
            approx = least_squares_fit(selected, test_function(selected.points), indices, basis)
            if error_method == ErrorMethod.PARSEVAL:
                report = l2_error_parseval(B2TensorOracle(basis, d), approx)
            else:
                report = l2_error_montecarlo(
                    test_function, approx, NATURAL_ERROR_MEASURE[basis], N=self.mc_points, seed=seed
                )
            error = report.value

        record = ExperimentRecord(
            d=d,
            R=R,
            m=indices.m,
            M=M,
            n=result.n,
            b=b,
            basis=basis,
            error_method=error_method,
            error=error,
            a_before=before.a_min,
            b_before=before.b_max,
            a_after=after.a_min,
            b_after=after.b_max,
            seed=seed,
            ms=(time.perf_counter() - started) * 1000.0,
        )
        logger.info(
            "d=%d R=%d m=%d M=%d n=%d %s error=%s (%.0f ms)",
            d, R, indices.m, M, result.n, basis.value,
            "-" if error is None else f"{error:.4e}", record.ms,
        )
        return record, nodes, selected

    def run_frame_bound_demo(self, config: Optional[ExperimentConfig] = None) -> List[FrameBoundArm]:
        """
        Frame bounds before and after subsampling for both bases.

        Runs Chebyshev nodes with the Chebyshev basis and uniform nodes with
        the half-period cosine basis at config.d and the first radius.
        """
        config = config or ExperimentConfig(d=2, radii=[20])
        arms = []
        for basis in (BasisTag.CHEBYSHEV, BasisTag.HALF_PERIOD_COSINE):
            record, nodes, selected = self._cell(config.d, config.radii[0], basis, config.b, config.seed, None)
            arms.append(FrameBoundArm(record=record, nodes=nodes, selected=selected))
        return arms

    def run_error_sweep(self, config: ExperimentConfig) -> List[ExperimentRecord]:
        """
        Error records for every radius and repeat of a configuration.

        A cell whose subsample fails the guarantee is logged, recorded in
        self.failures and skipped.
        """
        records = []
        for R in config.radii:
            for repeat in range(config.repeats):
                seed = cell_seed(config.seed, config.d, R, repeat)
                try:
                    record, _, _ = self._cell(config.d, R, config.basis, config.b, seed, config.error_method)
                except GuaranteeError as exc:
                    logger.error("d=%d R=%d seed=%d aborted: %s", config.d, R, seed, exc)
                    self.failures.append(
                        {"d": config.d, "R": R, "seed": seed, "margin": exc.margin, "tolerance": exc.tolerance}
                    )
                    continue
                records.append(record)
        return records


def run_frame_bound_demo(config: Optional[ExperimentConfig] = None) -> List[FrameBoundArm]:
    """See ExperimentRunner.run_frame_bound_demo"""
    return ExperimentRunner(selection=config.selection if config else None).run_frame_bound_demo(config)


def run_error_sweep(config: ExperimentConfig) -> List[ExperimentRecord]:
    """See ExperimentRunner.run_error_sweep; failed cells are logged and left out"""
    return ExperimentRunner(selection=config.selection).run_error_sweep(config)


def expected_slope(basis: BasisTag, d: int, n_min: float, n_max: float, s: Optional[float] = None) -> float:
    """Log-log slope of the theoretical reference curve between n_min and n_max"""
    if BasisTag(basis) == BasisTag.HALF_PERIOD_COSINE:
        return -HPC_RATE
    s = settings.EXPECTED_RATE if s is None else s
    n = np.geomspace(n_min, n_max, 32)
    slope, _ = np.polyfit(np.log(n), np.log(reference_curve(n, d, s)), 1)
    return float(slope)


def default_radii(d: int) -> List[int]:
    """Documented radius sweep for a dimension"""
    if d in DEFAULT_RADII:
        return list(DEFAULT_RADII[d])
    # fall back to a few small radii in high dimension
    return [2, 3, 4, 5]
