"""
Main entry point for the LMG sweep toolkit

    python -m src exact-sweep|sim-sweep|hull|analyze|compare [options]
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from src.analytics.hull_geometry import (
    AXES,
    SAMPLED_ANGLE_TOL,
    SAMPLED_ERROR_FACTOR,
    Hull3,
    as_coords,
    containment_report,
    coordinate_scale,
    detect_first_order_plane,
    detect_ruled_surfaces,
    largest_std_error,
    project_to_plane,
    quickhull3,
    ruling_candidates,
    supporting_plane_violations,
)
from src.analytics.trajectory import DEFAULT_JUMP_FACTOR, trajectory_analysis
from src.lmg.exact_set import exact_set_points
from src.models.lmg_models import HullSection, RdmPoint, Source, SweepConfig
from src.reporting.mesh_export import facet_groups, write_obj
from src.reporting.plots import plot_gradient, plot_projection
from src.reporting.report_generator import (
    ReportGenerator,
    comparison_frame,
    gradient_frame,
    projection_frame,
    read_points_csv,
    utc_now,
)
from src.swarm.sweep_orchestrator import SweepOrchestrator
from src.tomography.counts_io import read_counts, write_counts
from src.utils.config import load_config
from src.utils.errors import ConfigError, DomainError, LipkinError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--out", help="Output directory (overrides output.directory)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def _add_sweep_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, help="Root seed (unsigned 64-bit)")
    parser.add_argument("--shots", type=int, help="Shots per basis setting and repetition")
    parser.add_argument("--mode", help="exact, ideal or noisy")
    parser.add_argument("--n-particles", type=int, help="Number of particles / qubits")


def _add_hull_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--eps", type=float, help="Distance tolerance, relative to the largest coordinate magnitude (at least 1)")
    parser.add_argument("--angle-tol", type=float, help="Normal angle tolerance in radians")
    parser.add_argument("--min-lines", type=int, help="Rulings a facet needs to count as ruled")
    parser.add_argument("--n-particles", type=int, help="Particle number of the point files")
    parser.add_argument("--exact-set", type=int, metavar="DIRECTIONS",
                        help="Check containment against the exact set sampled along this many directions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lipkin", description="LMG ground-state order parameters and their convex hull")
    sub = parser.add_subparsers(dest="command", required=True)

    exact = sub.add_parser("exact-sweep", help="Exact ground states over the configured grid")
    _add_common(exact)
    _add_sweep_flags(exact)

    sim = sub.add_parser("sim-sweep", help="Simulated circuits and tomography over the configured grid")
    _add_common(sim)
    _add_sweep_flags(sim)
    sim.add_argument("--counts", help="Re-analyse a counts.jsonl file instead of running circuits")

    hull = sub.add_parser("hull", help="Convex hull, ruled surfaces and first-order planes")
    _add_common(hull)
    _add_hull_flags(hull)
    hull.add_argument("points", nargs="+", help="points.csv, optionally followed by a simulated points.csv")
    hull.add_argument("--drop-axis", default="jz2", choices=AXES, help="Axis removed by the projection")

    analyze = sub.add_parser("analyze", help="Gradient and speed along a lambda path")
    _add_common(analyze)
    analyze.add_argument("points", help="points.csv")
    analyze.add_argument("--epsilon", type=float, help="Select the rows with this epsilon")
    analyze.add_argument("--jump-factor", type=float, default=DEFAULT_JUMP_FACTOR)
    analyze.add_argument("--smooth", type=float, help="Gaussian smoothing width in grid steps")
    analyze.add_argument("--n-particles", type=int, help="Particle number of the point file")

    compare = sub.add_parser("compare", help="Exact against simulated points")
    _add_common(compare)
    _add_hull_flags(compare)
    compare.add_argument("exact", help="Exact points.csv")
    compare.add_argument("simulated", help="Simulated points.csv")
    return parser


def resolve_config(args: argparse.Namespace) -> SweepConfig:
    overrides = {
        key: getattr(args, key, None)
        for key in ("out", "seed", "shots", "mode", "n_particles", "eps", "angle_tol", "min_lines")
    }
    return load_config(args.config, overrides)


def cmd_exact_sweep(args: argparse.Namespace, command: str) -> int:
    started = utc_now()
    config = resolve_config(args)
    if config.mode != "exact":
        raise ConfigError("exact-sweep runs in mode exact; use sim-sweep for simulations", field="mode")
    orchestrator = SweepOrchestrator(config)
    print(f"Exact sweep: N={config.model.n_particles}, {len(orchestrator.grid)} points")
    rows = orchestrator.run_exact()
    reports = ReportGenerator(config.output.directory)
    path = reports.write_points(rows)
    reports.write_manifest(command, started, config, orchestrator.point_seeds())
    print(f"Wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_sim_sweep(args: argparse.Namespace, command: str) -> int:
    started = utc_now()
    config = resolve_config(args)
    if config.mode == "exact":
        if args.mode is not None:
            raise ConfigError("sim-sweep needs mode ideal or noisy", field="mode")
        config = config.model_copy(update={"mode": "sim_ideal"})
    orchestrator = SweepOrchestrator(config)
    reports = ReportGenerator(config.output.directory)

    if args.counts:
        print(f"Re-analysing counts from {args.counts}")
        records = read_counts(args.counts)
        rows = orchestrator.reanalyze(records)
    else:
        print(f"{config.mode} sweep: N={config.model.n_particles}, {len(orchestrator.grid)} points, "
              f"{config.shots} shots x {config.repetitions} repetitions")
        rows, records = orchestrator.run_simulated()
        counts_path = reports.path("counts.jsonl")
        write_counts(counts_path, records)
        reports.add_output(counts_path)

    path = reports.write_points(rows)
    reports.write_manifest(command, started, config, orchestrator.point_seeds())
    failed = sum(1 for row in rows if row.failed)
    print(f"Wrote {len(rows)} rows to {path}" + (f" ({failed} failed)" if failed else ""))
    return EXIT_OK


def _hull_report(hull: Hull3, points: Sequence[RdmPoint], min_lines: int) -> Tuple[dict, Dict[str, List[int]]]:
    params = [p.params for p in points]
    ruled = []
    for axis in ("jz", "jpm2"):
        candidates = set(ruling_candidates(hull.points, axis, hull.tolerance, params))
        candidates.update(ruling_candidates(hull.points, axis, hull.tolerance))
        ruled.append(detect_ruled_surfaces(hull, axis, min_lines=min_lines, candidates=sorted(candidates)))
    planes = detect_first_order_plane(hull)
    exact = [p for p in points if p.source is Source.EXACT]
    ruled_dicts = []
    for r in ruled:
        entry = r.to_dict()
        for segment, row in zip(r.segments, entry["segments"]):
            row["degenerate"] = [points[segment.start_index].degenerate, points[segment.end_index].degenerate]
        ruled_dicts.append(entry)
    report = {
        "points": len(points),
        "volume": hull.volume,
        "facets": len(hull.facets),
        "eps": hull.eps,
        "angle_tol": hull.angle_tol,
        "euler_characteristic": hull.euler_characteristic,
        "ruled_surfaces": ruled_dicts,
        "first_order_planes": [
            {
                "facet_id": f.id,
                "normal": [float(x) for x in f.normal],
                "vertices": [[float(x) for x in hull.points[v]] for v in f.corners],
                "limits": [points[v].params.limit for v in f.corners],
                "degenerate": [points[v].degenerate for v in f.corners],
            }
            for f in planes
        ],
        "supporting_plane_violations": supporting_plane_violations(exact) if exact else [],
    }
    return report, facet_groups(hull, ruled, planes)


def _containment(reference: Optional[Hull3], points: Sequence[RdmPoint], directions: Optional[int],
                 config: SweepConfig) -> dict:
    """Containment in the reference hull, or in the exact set sampled along `directions`"""
    if directions:
        reference = quickhull3(exact_set_points(points[0].params.n_particles, directions),
                               config.hull.eps, config.hull.angle_tol)
    margin = max(reference.tolerance, SAMPLED_ERROR_FACTOR * largest_std_error(points))
    return containment_report(reference, points, margin).to_dict()


def _hull_settings(hull_cfg: HullSection, points: Sequence[RdmPoint]) -> HullSection:
    """Sampled points get eps = 3 standard errors and a 1e-2 angle tolerance unless set explicitly"""
    error = largest_std_error(points)
    if error <= 0.0:
        return hull_cfg
    tuned = hull_cfg.with_defaults(eps=SAMPLED_ERROR_FACTOR * error / coordinate_scale(as_coords(points)),
                                   angle_tol=SAMPLED_ANGLE_TOL)
    print(f"Sampled points (largest standard error {error:.3g}): eps {tuned.eps:.3g}, "
          f"angle tolerance {tuned.angle_tol:g}")
    return tuned


def cmd_hull(args: argparse.Namespace, command: str) -> int:
    started = utc_now()
    if len(args.points) > 2:
        raise ConfigError("hull takes one points file, or an exact and a simulated one", field="points")
    config = resolve_config(args)
    points = read_points_csv(args.points[0], args.n_particles)
    hull_cfg = _hull_settings(config.hull, points)
    hull = quickhull3(points, hull_cfg.eps, hull_cfg.angle_tol)
    report, groups = _hull_report(hull, points, hull_cfg.min_lines)

    if len(args.points) == 2:
        noisy = read_points_csv(args.points[1], args.n_particles or points[0].params.n_particles)
        report["containment"] = _containment(hull, noisy, args.exact_set, config)
    elif args.exact_set:
        report["containment"] = _containment(None, points, args.exact_set, config)

    formats = config.output.formats
    reports = ReportGenerator(config.output.directory)
    if "obj" in formats:
        reports.add_output(write_obj(hull, reports.path("hull.obj"), groups))
    if "json" in formats:
        reports.write_json(report, "hull_report.json")
    projection = project_to_plane(points, args.drop_axis, hull_cfg.eps)
    reports.write_frame(projection_frame(projection), "projection.csv")
    if "svg" in formats:
        reports.add_output(plot_projection(projection, reports.path("projection.svg")))
    reports.write_manifest(command, started, config if args.config else None)

    print(f"Hull: {len(hull.facets)} facets, volume {hull.volume:.6g}")
    for ruled in report["ruled_surfaces"]:
        print(f"  ruled along {ruled['axis']}: {len(ruled['facet_ids'])} facets, {len(ruled['segments'])} rulings")
    print(f"  first-order planes: {len(report['first_order_planes'])}")
    if "containment" in report:
        c = report["containment"]
        print(f"  containment: {c['contained']}, volume ratio {c['volume_ratio']:.4g}")
    return EXIT_OK


def select_path(points: List[RdmPoint], epsilon: Optional[float]) -> List[RdmPoint]:
    """Rows on one epsilon, sorted by lambda"""
    if epsilon is not None:
        points = [p for p in points if abs(p.params.epsilon - epsilon) <= 1e-12 * max(1.0, abs(epsilon))]
        if not points:
            raise DomainError(f"no rows with epsilon={epsilon:g}")
    epsilons = sorted({p.params.epsilon for p in points})
    if len(epsilons) > 1:
        raise DomainError(f"mixed epsilon values {epsilons}; pass --epsilon")
    return sorted(points, key=lambda p: p.params.lam)


def cmd_analyze(args: argparse.Namespace, command: str) -> int:
    started = utc_now()
    config = resolve_config(args)
    path = select_path(read_points_csv(args.points, args.n_particles), args.epsilon)
    analysis = trajectory_analysis(path, args.jump_factor, args.smooth)
    epsilon = path[0].params.epsilon

    formats = config.output.formats
    reports = ReportGenerator(config.output.directory)
    reports.write_frame(gradient_frame(analysis), "gradient.csv")
    if "svg" in formats:
        reports.add_output(plot_gradient(analysis, reports.path("gradient.svg"), epsilon))
    if "json" in formats:
        reports.write_json({"epsilon": epsilon, **analysis.to_dict()}, "analysis.json")
    reports.write_manifest(command, started, config if args.config else None)
    print(f"Gradient peak at lambda={analysis.peak_lambda:g} (height {analysis.peak_height:.4g}, "
          f"width {analysis.peak_width:.3g})")
    if analysis.discontinuities:
        print(f"  discontinuities near lambda = {[float(analysis.lambdas[i]) for i in analysis.discontinuities]}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, command: str) -> int:
    started = utc_now()
    config = resolve_config(args)
    exact = read_points_csv(args.exact, args.n_particles)
    simulated = read_points_csv(args.simulated, args.n_particles or exact[0].params.n_particles)
    table = comparison_frame(exact, simulated)

    summary = {"matched_points": int(len(table))}
    for axis in ("jz", "jz2", "jpm2"):
        summary[f"max_abs_d_{axis}"] = float(table[f"d_{axis}"].abs().max()) if len(table) else 0.0
        z = table[f"z_{axis}"].abs().dropna()
        summary[f"max_abs_z_{axis}"] = float(z.max()) if len(z) else None
    try:
        hull = None if args.exact_set else quickhull3(exact, config.hull.eps, config.hull.angle_tol)
        summary.update(_containment(hull, simulated, args.exact_set, config))
    except LipkinError as e:
        logging.getLogger(__name__).warning("no containment check: %s", e)
        summary["contained"] = None

    reports = ReportGenerator(config.output.directory)
    reports.write_frame(table, "comparison.csv")
    if "json" in config.output.formats:
        reports.write_json(summary, "comparison.json")
    reports.write_manifest(command, started, config if args.config else None)
    print(f"Compared {summary['matched_points']} points; max |d jz| = {summary['max_abs_d_jz']:.4g}")
    return EXIT_OK


COMMANDS = {
    "exact-sweep": cmd_exact_sweep,
    "sim-sweep": cmd_sim_sweep,
    "hull": cmd_hull,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    command = " ".join(["lipkin"] + argv)

    try:
        return COMMANDS[args.command](args, command)
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        return 1
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except LipkinError as e:
        print(f"Numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
