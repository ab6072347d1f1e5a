"""
Command-line interface

Subcommands for each pipeline step (cross, sample, subsample, recover, coeffs)
and for the experiments (frame-bounds, cheb-sweep, cosine-sweep, rate). Run as

    python -m app.cli <command> [options]

Exit status is 1 when a subsample fails the lower frame bound guarantee and 2
for invalid arguments or numerical preconditions.
"""
import argparse
import logging
import sys
from logging.config import dictConfig
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from sqlalchemy.orm import Session

from app.config import settings
from app.database import make_engine
from app.exceptions import GuaranteeError, ParameterError, RecoveryError
from app.logconf import DEFAULT_LOGGER, log_config
from app.models import Base
from app.models.experiment import ExperimentRun as ExperimentRunModel
from app.schemas.base import NATURAL_ERROR_MEASURE, BasisTag, ErrorMethod, Measure
from app.schemas.experiment import ExperimentConfig, ExperimentRecord
from app.schemas.recovery import RecoveryResult
from app.services import storage
from app.services.bases import design_matrix
from app.services.experiments import (
    ExperimentRunner,
    aggregate_medians,
    default_radii,
    expected_slope,
    fit_decay_rate,
)
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.recovery import l2_error_montecarlo, l2_error_parseval, least_squares_fit
from app.services.reference_problems import B2TensorOracle, b2_cheb_coeffs, b2_hpc_coeffs, test_function
from app.services.sampling import draw_nodes, oversampled_budget
from app.services.subsampling import require_guarantee, subsample_nodes

logger = logging.getLogger(DEFAULT_LOGGER)

MEASURES = {"cheb": Measure.CHEBYSHEV, "chebyshev": Measure.CHEBYSHEV, "uniform": Measure.UNIFORM}
FUNCTIONS = {"b2tensor": test_function}


def _radii(value: str) -> List[int]:
    return [int(token) for token in value.split(",") if token.strip()]


def _persist(url: str, records: List[ExperimentRecord], kind: str, selected=None) -> None:
    engine = make_engine(url)
    Base.metadata.create_all(bind=engine)
    selected = selected or [None] * len(records)
    with Session(engine) as db:
        ExperimentRunModel.create_many(
            db, [ExperimentRunModel.from_record(r, kind=kind, selected=s) for r, s in zip(records, selected)]
        )
    logger.info("stored %d %s records in %s", len(records), kind, url)


def cmd_cross(args) -> int:
    index_set = enumerate_hyperbolic_cross(args.dim, args.radius)
    budget = oversampled_budget(index_set.m) if index_set.m >= 2 else None
    print(f"d={index_set.d} R={index_set.R} m={index_set.m} M={budget}")
    if args.list:
        for k in index_set.as_tuples():
            print(",".join(str(entry) for entry in k))
    if args.out:
        storage.write_index_set(args.out, index_set)
    return 0


def cmd_sample(args) -> int:
    nodes = draw_nodes(MEASURES[args.measure], args.dim, args.count, args.seed)
    storage.write_nodes(args.out, nodes)
    logger.info("wrote %d %s nodes to %s", nodes.count, nodes.measure.value, args.out)
    return 0


def cmd_subsample(args) -> int:
    nodes = storage.read_nodes(args.nodes, d=args.dim)
    index_set = enumerate_hyperbolic_cross(args.dim, args.radius)
    basis = BasisTag(args.basis)
    if args.dump_matrix:
        storage.write_design_matrix(args.dump_matrix, design_matrix(nodes, index_set, basis, normalized=False))

    selected, result, summary = subsample_nodes(nodes, index_set, basis, args.b, selection=args.selection)
    storage.write_nodes(args.out, selected)
    storage.append_jsonl(args.meta or f"{args.out}.meta.jsonl", summary)
    print(summary.model_dump_json(exclude={"indices"}))
    require_guarantee(result)
    return 0


def cmd_recover(args) -> int:
    nodes = storage.read_nodes(args.nodes, d=args.dim)
    index_set = enumerate_hyperbolic_cross(args.dim, args.radius)
    basis = BasisTag(args.basis)
    f = FUNCTIONS[args.function]
    approx = least_squares_fit(nodes, f(nodes.points), index_set, basis)

    if ErrorMethod(args.error) == ErrorMethod.PARSEVAL:
        report = l2_error_parseval(B2TensorOracle(basis, args.dim), approx)
    else:
        report = l2_error_montecarlo(f, approx, NATURAL_ERROR_MEASURE[basis], N=args.mc_points, seed=args.seed)

    result = RecoveryResult(
        d=args.dim,
        R=args.radius,
        m=index_set.m,
        n=nodes.count,
        basis=basis,
        function=args.function,
        error=report.value,
        error_method=report.method,
        error_measure=report.measure,
        standard_error=report.standard_error,
        mc_points=report.mc_points,
        tail_cutoff=report.tail_cutoff,
        remainder_bound=report.remainder_bound,
        residual_norm=approx.residual_norm,
        coefficients=approx.coefficients.tolist() if args.coefficients else None,
    )
    storage.write_json(args.out, result)
    print(f"{report.method.value} {report.measure.value} error {report.value:.6e}")
    return 0


def cmd_coeffs(args) -> int:
    table = b2_cheb_coeffs(args.kmax) if BasisTag(args.basis) == BasisTag.CHEBYSHEV else b2_hpc_coeffs(args.kmax)
    print("k,coefficient")
    for k, value in enumerate(table):
        print(f"{k},{value:.17g}")
    return 0


def cmd_frame_bounds(args) -> int:
    config = ExperimentConfig(d=2, radii=[args.radius], b=args.b, seed=args.seed, selection=args.selection)
    arms = ExperimentRunner(selection=config.selection).run_frame_bound_demo(config)
    records = [arm.record for arm in arms]
    for record in records:
        print(
            f"{record.basis.value}: m={record.m} M={record.M} n={record.n} "
            f"before=({record.a_before:.3f}, {record.b_before:.3f}) after=({record.a_after:.3f}, {record.b_after:.3f})"
        )
    if args.out:
        storage.write_records(args.out, records)
    if args.nodes_dir:
        directory = Path(args.nodes_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for arm in arms:
            storage.write_nodes(directory / f"{arm.record.basis.value}_nodes.csv", arm.nodes)
            storage.write_nodes(directory / f"{arm.record.basis.value}_selected.csv", arm.selected)
    if args.db:
        _persist(args.db, records, "frame_bounds", [arm.selected.subset.tolist() for arm in arms])
    return 0


def _sweep(args, basis: BasisTag, kind: str) -> int:
    config = ExperimentConfig(
        d=args.dim,
        radii=args.radii or default_radii(args.dim),
        b=args.b,
        basis=basis,
        seed=args.seed,
        repeats=args.repeats,
        error_method=ErrorMethod(args.error),
        selection=args.selection,
    )
    runner = ExperimentRunner(selection=config.selection, mc_points=args.mc_points)
    records = runner.run_error_sweep(config)
    if args.out:
        storage.write_records(args.out, records)
    for record in aggregate_medians(records):
        print(f"n={record.n} error={record.error:.6e}")
    if args.db:
        _persist(args.db, records, kind)
    if runner.failures:
        logger.error("%d cells failed the lower frame bound guarantee", len(runner.failures))
        return 1
    return 0


def cmd_cheb_sweep(args) -> int:
    return _sweep(args, BasisTag.CHEBYSHEV, "cheb_sweep")


def cmd_cosine_sweep(args) -> int:
    return _sweep(args, BasisTag.HALF_PERIOD_COSINE, "cosine_sweep")


def cmd_rate(args) -> int:
    records = aggregate_medians(storage.read_records(args.input))
    series = sorted({(record.d, record.basis.value) for record in records})
    if len(series) > 1:
        raise ParameterError(f"records mix several (d, basis) series: {series}; fit one at a time")
    slope = fit_decay_rate(records, args.nmin, args.nmax)
    first = records[0]
    n_min = args.nmin or records[0].n
    n_max = args.nmax or records[-1].n
    reference = expected_slope(first.basis, first.d, n_min, n_max)
    print(f"fitted slope {slope:.4f}, reference slope {reference:.4f} (d={first.d}, {first.basis.value})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m app.cli",
        description="Least-squares recovery on hyperbolic crosses from subsampled random nodes.",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default: %(default)s).")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("cross", help="Size and members of a hyperbolic cross.")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--list", action="store_true", help="Print every multi-index.")
    p.add_argument("--out", help="Optional CSV file for the multi-indices.")
    p.set_defaults(handler=cmd_cross)

    p = commands.add_parser("sample", help="Draw a seeded random node set.")
    p.add_argument("--measure", choices=sorted(MEASURES), default="cheb")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_sample)

    p = commands.add_parser("subsample", help="Subsample a node set preserving the lower frame bound.")
    p.add_argument("--nodes", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--basis", choices=[tag.value for tag in BasisTag], default="cheb")
    p.add_argument("--b", type=float, default=settings.OVERSAMPLING_FACTOR)
    p.add_argument("--selection", choices=["first", "best"], default=settings.SUBSAMPLE_SELECTION)
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="JSON-lines metadata file (default: <out>.meta.jsonl).")
    p.add_argument("--dump-matrix", help="Optional CSV dump of the full design matrix.")
    p.set_defaults(handler=cmd_subsample)

    p = commands.add_parser("recover", help="Fit least squares on a node set and report the L2 error.")
    p.add_argument("--nodes", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--basis", choices=[tag.value for tag in BasisTag], default="cheb")
    p.add_argument("--function", choices=sorted(FUNCTIONS), default="b2tensor")
    p.add_argument("--error", choices=[method.value for method in ErrorMethod], default="parseval")
    p.add_argument("--mc-points", type=int, default=settings.MC_POINTS)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--coefficients", action="store_true", help="Include the coefficients in the JSON.")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_recover)

    p = commands.add_parser("coeffs", help="Exact univariate coefficients of B_2 as CSV.")
    p.add_argument("--basis", choices=[tag.value for tag in BasisTag], default="cheb")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(handler=cmd_coeffs)

    p = commands.add_parser(
        "frame-bounds", aliases=["fig2"], help="Frame bounds before and after subsampling, both bases."
    )
    p.add_argument("--radius", type=int, default=20)
    p.add_argument("--nodes-dir", help="Directory for the full and selected node sets.")
    p.set_defaults(handler=cmd_frame_bounds)

    for name, alias, handler, help_text in (
        ("cheb-sweep", "fig3", cmd_cheb_sweep, "Error sweep with the Chebyshev basis in L2(rho)."),
        ("cosine-sweep", "fig4", cmd_cosine_sweep, "Error sweep with the half-period cosine basis in L2."),
    ):
        p = commands.add_parser(name, aliases=[alias], help=help_text)
        p.add_argument("--dim", type=int, required=True)
        p.add_argument("--radii", type=_radii, help="Comma-separated radii (default: per-dimension sweep).")
        p.add_argument("--repeats", type=int, default=settings.DEFAULT_REPEATS)
        p.add_argument("--error", choices=[method.value for method in ErrorMethod], default="parseval")
        p.add_argument("--mc-points", type=int, default=settings.MC_POINTS)
        p.set_defaults(handler=handler)

    for name in ("frame-bounds", "cheb-sweep", "cosine-sweep"):
        p = commands.choices[name]
        p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        p.add_argument("--b", type=float, default=settings.OVERSAMPLING_FACTOR)
        p.add_argument("--selection", choices=["first", "best"], default=settings.SUBSAMPLE_SELECTION)
        p.add_argument("--out", help="CSV file for the experiment records.")
        p.add_argument("--db", help="Also store the records in this database URL.")

    p = commands.add_parser("rate", help="Fit the log-log decay rate of a records CSV.")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--nmin", type=float)
    p.add_argument("--nmax", type=float)
    p.set_defaults(handler=cmd_rate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    dictConfig(log_config)
    logger.setLevel(args.log_level.upper())
    try:
        return args.handler(args)
    except GuaranteeError as exc:
        logger.error("%s", exc)
        return 1
    except (RecoveryError, ValidationError, ValueError, OSError) as exc:
        logger.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
