"""
VRJP Lab CLI

Usage:
    vlab verify density
    vlab verify all -c configs/verify_all.yaml --threads 4
    vlab decay --n 4 --s 0.5 --y 1,0 --y 2,0 --y 3,0
    vlab sample --graph two_vertex --n-samples 100000
    vlab vrjp --graph triangle --k 3 --runs 1000000
    vlab resistance --n 3 --y 2,0
    vlab graph --graph box --n 2
"""

import argparse
import logging
import sys
from dataclasses import replace

import fsspec
import numpy as np

# Import suites to register their checks
from vrjp_lab import __version__, suites  # noqa: F401
from vrjp_lab.deformation.harmonic import harmonic_report, inf_norm, nash_williams_sum
from vrjp_lab.dynamics.law import JumpChainLaw, total_variation, vrjp_jump_chain_law
from vrjp_lab.dynamics.simulate import simulate_vrjp
from vrjp_lab.experiments.decay import run_decay
from vrjp_lab.field.quadrature import marginal_cdf
from vrjp_lab.framework import CheckContext, CheckRegistry, ConfigError, LabConfig, resolve_suites, stream
from vrjp_lab.framework.executor import Executor
from vrjp_lab.framework.report import FAIL, INCONCLUSIVE, PASS, ExperimentReport, ReportCollector, Verdict
from vrjp_lab.framework.report.writer import ReportWriter
from vrjp_lab.graph.core import build_z2_box, edge_gradients
from vrjp_lab.graph.io import write_edge_list
from vrjp_lab.sampler.estimate import estimate_exp_moment, ks_distance
from vrjp_lab.sampler.samples import sample_field
from vrjp_lab.writers import RESISTANCE_COLUMNS, CsvTableWriter, SampleWriter, write_estimates, write_jump_chain_law
from vrjp_lab.writers.records import write_trajectory

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)

# Suppress noisy logs from third-party libraries
for logger_name in [
    "ray",
    "numba",
    "matplotlib",
    "fsspec",
]:
    logging.getLogger(logger_name).setLevel(logging.WARNING)

KS_THRESHOLD = 0.02


def parse_label(text: str):
    """`2,0` -> (2, 0); `1` -> 1."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ConfigError("--y", f"expected an integer or an `x,y` pair, got {text!r}") from None
    if len(values) == 1:
        return values[0]
    if len(values) == 2:
        return tuple(values)
    raise ConfigError("--y", f"expected an integer or an `x,y` pair, got {text!r}")


def load_config(args) -> LabConfig:
    """Config file (or defaults) with the global flags applied."""
    config = LabConfig.from_yaml(args.config) if args.config else LabConfig()
    return config.apply_overrides(seed=args.seed, threads=args.threads, out_dir=args.out_dir)


def _apply_graph_args(config: LabConfig, args):
    changes = {}
    if args.graph is not None:
        changes["kind"] = args.graph
    if args.edge_list is not None:
        changes.update(kind="edge_list", path=args.edge_list)
    for name in ("n", "w", "size", "root"):
        if getattr(args, name, None) is not None:
            changes[name] = getattr(args, name)
    if changes:
        config.graph = replace(config.graph, **changes)


def _apply_sampler_args(config: LabConfig, args):
    changes = {
        name: getattr(args, name)
        for name in ("n_samples", "n_chains", "burn_in", "thinning", "step_size")
        if getattr(args, name, None) is not None
    }
    if changes:
        config.sampler = replace(config.sampler, **changes)


def _collector(command: str, config: LabConfig) -> ReportCollector:
    return ReportCollector(command, config.to_dict(), config.executor.seed, config.digest())


def _finish(collector: ReportCollector, out_dir: str, worker_stats: list | None = None) -> int:
    """Write the report, print the summary and return the exit code."""
    report = collector.build_report()
    paths = ReportWriter(out_dir).write(report, collector)
    _print_summary(report, paths)
    for stats in worker_stats or []:
        print(f"  Worker {stats.get('name')}: {stats.get('jobs', 0)} jobs, {stats.get('busy_time', 0.0):.2f}s busy")
    return report.exit_code


def cmd_graph(args) -> int:
    """Write the configured graph as an edge list with its vertex-label table."""
    config = load_config(args)
    _apply_graph_args(config, args)
    graph = config.graph.build()
    fs, root = fsspec.core.url_to_fs(config.executor.out_dir)
    fs.makedirs(root, exist_ok=True)
    path = f"{config.executor.out_dir.rstrip('/')}/graph.txt"
    write_edge_list(graph, path)
    print(f"{graph}: {graph.n_vertices} vertices, {graph.n_edges} edges")
    print(f"  Edge list: {path}")
    print(f"  Labels: {path}.labels.json")
    return 0


def cmd_sample(args) -> int:
    """Sample the mixing field, persist the chains and estimate E[e^{s u_y}]."""
    config = load_config(args)
    _apply_graph_args(config, args)
    _apply_sampler_args(config, args)
    if args.s is not None:
        config.deformation = replace(config.deformation, s=args.s)
    graph = config.graph.build()
    collector = _collector("sample", config)
    out_dir = config.executor.out_dir

    if args.y:
        targets = [parse_label(y) for y in args.y]
    elif graph.box_radius is not None:
        targets = [tuple(y) for y in config.deformation.ys if inf_norm(tuple(y)) <= graph.box_radius]
    else:
        targets = [label for label in graph.labels if label != graph.root_label]

    print(f"Sampling {graph} with {config.sampler.n_chains} chains x {config.sampler.samples_per_chain} samples...")
    with Executor(config.executor) as executor, collector.track_run():
        with collector.track_check("sample_field"):
            samples = sample_field(graph, config.sampler, executor=executor, dump_dir=out_dir)
        SampleWriter(out_dir).write(samples, seed=config.sampler.seed)

        estimates = [
            estimate_exp_moment(samples, y, config.deformation.s, config.sampler.n_batches) for y in targets
        ]
        write_estimates(estimates, graph.box_radius, f"{out_dir.rstrip('/')}/sample_estimates.csv")
        for estimate in estimates:
            print(f"  E[exp({estimate.s} u_{estimate.y})] = {estimate.estimate:.6f} ± {estimate.stderr:.2g}")

        if graph.n_vertices == 2:
            free = graph.labels[int(graph.free_vertices[0])]
            grid, cdf = marginal_cdf(graph, free)
            distance = ks_distance(samples.coordinate(free), grid, cdf)
            collector.add_verdicts(
                [
                    Verdict(
                        suite="sample",
                        check="two_vertex_marginal",
                        instance=f"{graph}, {samples.n_samples} samples",
                        observed=distance,
                        bound=KS_THRESHOLD,
                        tolerance=0.0,
                        status=PASS if distance < KS_THRESHOLD else FAIL,
                        reference="KS distance to the quadrature marginal",
                    )
                ]
            )
        rates = ", ".join(f"{rate:.2f}" for rate in samples.acceptance_rates)
        collector.add_note(f"acceptance rates per chain: {rates}")
        worker_stats = executor.get_stats()
    return _finish(collector, out_dir, worker_stats)


def cmd_vrjp(args) -> int:
    """Estimate the VRJP jump-chain law and write one sample trajectory."""
    config = load_config(args)
    _apply_graph_args(config, args)
    changes = {name: getattr(args, name) for name in ("k", "n_runs", "batch_size") if getattr(args, name) is not None}
    if args.start is not None:
        changes["start"] = args.start
    if changes:
        config.vrjp = replace(config.vrjp, **changes)
    graph = config.graph.build()
    start = graph.root_label if config.vrjp.start is None else graph.labels[config.vrjp.start]
    collector = _collector("vrjp", config)
    out_dir = config.executor.out_dir.rstrip("/")

    print(f"Simulating {config.vrjp.n_runs} VRJP runs of {config.vrjp.k} jumps on {graph}...")
    with Executor(config.executor) as executor, collector.track_run():
        with collector.track_check("vrjp_jump_chain_law"):
            law = vrjp_jump_chain_law(
                graph, start, config.vrjp.k, config.vrjp.n_runs, config.executor.seed, config.vrjp.batch_size, executor
            )
        write_jump_chain_law(law, f"{out_dir}/vrjp_law.json")
        trajectory = simulate_vrjp(graph, start, config.vrjp.k, stream(config.executor.seed, "trajectory"))
        write_trajectory(trajectory, graph, f"{out_dir}/vrjp_trajectory.csv")
        print(f"  {len(law.probabilities)} distinct sequences")

        if config.vrjp.k == 1:
            neighbours, weights = graph.neighbors(graph.index(start))
            exact = JumpChainLaw(
                start,
                1,
                {(graph.labels[j],): float(w / weights.sum()) for j, w in zip(neighbours, weights, strict=True)},
            )
            tv, combined = total_variation(law, exact)
            collector.add_verdicts(
                [
                    Verdict(
                        suite="vrjp",
                        check="first_jump",
                        instance=f"{graph}, {config.vrjp.n_runs} runs",
                        observed=tv,
                        bound=0.0,
                        tolerance=3.0 * combined,
                        status=PASS if tv <= 3.0 * combined else FAIL,
                        reference="first jump ∝ W",
                    )
                ]
            )
        worker_stats = executor.get_stats()
    return _finish(collector, out_dir, worker_stats)


def cmd_resistance(args) -> int:
    """R(0, y) on a wired box with its Nash-Williams lower bound and maximal current."""
    config = load_config(args)
    if args.n is not None:
        config.graph = replace(config.graph, kind="box", n=args.n)
    if args.y:
        config.deformation = replace(config.deformation, ys=[list(parse_label(y)) for y in args.y])
    n = config.graph.n
    graph = build_z2_box(n, config.graph.wh, config.graph.wv)
    collector = _collector("resistance", config)

    rows, verdicts = [], []
    with collector.track_run():
        for y in config.deformation.ys:
            y = tuple(y)
            if inf_norm(y) > n:
                raise ConfigError("deformation.ys", f"target {y} lies outside the box of radius {n}")
            report = harmonic_report(graph, (0, 0), y)
            resistance = report.resistance
            current = float(resistance * np.max(np.abs(edge_gradients(graph, report.v))))
            bound = nash_williams_sum(inf_norm(y)) if inf_norm(y) >= 2 else None
            rows.append(
                {
                    "N": n,
                    "y_x": y[0],
                    "y_y": y[1],
                    "R": resistance,
                    "nash_williams": bound,
                    "max_current": current,
                    "energy_times_R": report.energy / report.source_divergence,
                }
            )
            print(f"  y={y}: R={resistance:.6f} NW={'-' if bound is None else f'{bound:.6f}'} max R|∇v|={current:.6f}")
            instance = f"box N={n}, y={y}"
            verdicts.append(
                Verdict(
                    suite="resistance",
                    check="current_flow",
                    instance=instance,
                    observed=current,
                    bound=1.0,
                    tolerance=1e-8,
                    status=PASS if current <= 1.0 + 1e-8 else FAIL,
                    reference="R|∇v| ≤ 1 for a unit current flow",
                )
            )
            if bound is not None:
                verdicts.append(
                    Verdict(
                        suite="resistance",
                        check="nash_williams",
                        instance=instance,
                        observed=resistance,
                        bound=bound,
                        tolerance=0.0,
                        status=PASS if resistance >= bound else FAIL,
                        reference="R(0,y) ≥ Σ 1/(4(2k+1))",
                    )
                )
        CsvTableWriter(f"{config.executor.out_dir.rstrip('/')}/resistance.csv", RESISTANCE_COLUMNS).write(rows)
        collector.add_verdicts(verdicts)
    return _finish(collector, config.executor.out_dir)


def cmd_decay(args) -> int:
    """Scan E[e^{s u_y}] over targets y on one box against the deformation bound."""
    config = load_config(args)
    if args.n is not None:
        config.graph = replace(config.graph, kind="box", n=args.n)
    changes = {name: getattr(args, name) for name in ("s", "wbar") if getattr(args, name) is not None}
    if args.y:
        changes["ys"] = [list(parse_label(y)) for y in args.y]
    if changes:
        config.deformation = replace(config.deformation, **changes)
    _apply_sampler_args(config, args)
    collector = _collector(f"decay_n{config.graph.n}", config)

    print(f"Decay scan on the box N={config.graph.n}, s={config.deformation.s}, W̄={config.deformation.wbar}")
    with Executor(config.executor) as executor, collector.track_run():
        with collector.track_check("decay_scan"):
            scan = run_decay(config, executor)
        for row in scan.rows:
            collector.add_decay_row(row)
        collector.add_verdicts(scan.verdicts)
        collector.set_slope(scan.slope)
        for note in scan.notes:
            collector.add_note(note)

        print("\n" + "=" * 60)
        print(f"{'y':>10} {'R':>10} {'estimate':>12} {'stderr':>10} {'bound':>10}  status")
        for row in scan.rows:
            print(
                f"{str(row.y):>10} {row.resistance:>10.4f} {row.estimate:>12.6f} "
                f"{row.stderr:>10.2g} {row.bound:>10.6f}  {row.status}"
            )
        worker_stats = executor.get_stats()
    return _finish(collector, config.executor.out_dir, worker_stats)


def cmd_verify(args) -> int:
    """Run one verification suite (or all of them)."""
    config = load_config(args)
    selected = resolve_suites(args.suite, config.suites)
    collector = _collector(f"verify_{args.suite}", config)
    checks = []

    with Executor(config.executor) as executor, collector.track_run():
        context = CheckContext(config, executor, config.executor.seed)
        for suite in selected:
            print(f"\nSuite '{suite.name}':")
            for check_config in suite.checks:
                if not check_config.enabled:
                    continue
                check = CheckRegistry.create(check_config.get_class_name(), check_config.params)
                with collector.track_check(f"{suite.name}/{check.name}"):
                    verdicts = check.run(context)
                collector.add_verdicts(verdicts)
                checks.append((suite.name, check))
                worst = _worst(v.status for v in verdicts)
                print(f"  [{worst.upper():>12}] {check.name} ({len(verdicts)} verdicts)")
                for verdict in verdicts:
                    if not verdict.passed:
                        print(f"      {verdict.describe()}")
        worker_stats = executor.get_stats()
    code = _finish(collector, config.executor.out_dir, worker_stats)
    _print_check_stats(checks)
    return code


def _worst(statuses) -> str:
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def _print_summary(report: ExperimentReport, paths: dict[str, str]):
    counts = report.counts()
    print("\n" + "=" * 60)
    print(f"Run {report.metadata.run_id} completed: {report.status.upper()}")
    print(f"  Passed: {counts[PASS]}  Failed: {counts[FAIL]}  Inconclusive: {counts[INCONCLUSIVE]}")
    if report.slope is not None:
        print(
            f"  Slope of ln E[e^(s u_y)] vs ln|y|: {report.slope.slope:.4g} "
            f"[{report.slope.ci_low:.4g}, {report.slope.ci_high:.4g}] (-η = {report.slope.reference_slope:.3g})"
        )
    for note in report.notes:
        print(f"  Note: {note}")
    for kind, path in paths.items():
        print(f"  {kind}: {path}")
    print("=" * 60)


def _print_check_stats(checks):
    """Print per-check timing statistics."""
    print("\n" + "=" * 60)
    print("Check Statistics:")
    print("=" * 60)
    if not checks:
        print("  No statistics available")
        print("=" * 60)
        return
    for suite, check in checks:
        stats = check.get_stats()
        print(f"  {suite}/{check.name}:")
        print(f"    Verdicts: {stats.get('verdicts', 0)}")
        print(f"    Total time: {stats.get('total_time', 0.0):.2f}s")
    print("=" * 60)


def _run(command, args):
    """Run a subcommand with the error handling shared by all of them."""
    try:
        sys.exit(command(args))
    except KeyboardInterrupt:
        print("\nInterrupted by user")
        sys.exit(1)
    except FileNotFoundError as e:
        print(f"\nError: File not found: {e}")
        sys.exit(1)
    except ConfigError as e:
        print(f"\nConfiguration error: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"\nError: {e}")
        import traceback

        traceback.print_exc()
        sys.exit(1)


def _add_graph_args(parser):
    parser.add_argument("--graph", type=str, default=None, help="Graph kind: box, two_vertex, triangle, path, cycle")
    parser.add_argument("--n", type=int, default=None, help="Box radius N")
    parser.add_argument("--w", type=float, default=None, help="Conductance of named graphs")
    parser.add_argument("--size", type=int, default=None, help="Vertex count of path/cycle graphs")
    parser.add_argument("--edge-list", type=str, default=None, help="Read the graph from an `i j W` edge list")
    parser.add_argument("--root", type=int, default=None, help="Root vertex id of an edge-list graph (overrides the file's root line)")


def _add_sampler_args(parser):
    parser.add_argument("--n-samples", dest="n_samples", type=int, default=None, help="Retained samples in total")
    parser.add_argument("--chains", dest="n_chains", type=int, default=None, help="Independent chains")
    parser.add_argument("--burn-in", dest="burn_in", type=int, default=None, help="Burn-in sweeps per chain")
    parser.add_argument("--thinning", type=int, default=None, help="Sweeps between retained samples")
    parser.add_argument("--step-size", dest="step_size", type=float, default=None, help="Initial proposal σ")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=str, default=None, help="YAML config (or a JSON report to re-run)")
    common.add_argument("--seed", type=int, default=None, help="Master seed (default: from config)")
    common.add_argument("--out-dir", dest="out_dir", type=str, default=None, help="Output directory")
    common.add_argument("--threads", type=int, default=None, help="Ray workers; 1 runs in-process")

    parser = argparse.ArgumentParser(
        prog="vlab",
        description="VRJP Lab - mixing field, jump processes and deformation bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    graph_parser = subparsers.add_parser("graph", parents=[common], help="Write a graph as an edge list")
    _add_graph_args(graph_parser)

    sample_parser = subparsers.add_parser("sample", parents=[common], help="Sample the mixing field")
    _add_graph_args(sample_parser)
    _add_sampler_args(sample_parser)
    sample_parser.add_argument("--y", action="append", default=None, help="Target vertex (`x,y` on boxes)")
    sample_parser.add_argument("--s", type=float, default=None, help="Moment exponent s")

    vrjp_parser = subparsers.add_parser("vrjp", parents=[common], help="Simulate VRJP jump chains")
    _add_graph_args(vrjp_parser)
    vrjp_parser.add_argument("--k", type=int, default=None, help="Jumps per run")
    vrjp_parser.add_argument("--runs", dest="n_runs", type=int, default=None, help="Number of runs")
    vrjp_parser.add_argument("--batch-size", dest="batch_size", type=int, default=None, help="Runs per job")
    vrjp_parser.add_argument("--start", type=int, default=None, help="Start vertex (dense index; default: root)")

    resistance_parser = subparsers.add_parser("resistance", parents=[common], help="Effective resistance on a box")
    resistance_parser.add_argument("--n", type=int, default=None, help="Box radius N")
    resistance_parser.add_argument("--y", action="append", default=None, help="Target `x,y`")

    decay_parser = subparsers.add_parser(
        "decay",
        parents=[common],
        help="Decay scan of E[e^{s u_y}] on a box",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    vlab decay --n 4 --s 0.5 --y 1,0 --y 2,0 --y 3,0
    vlab decay -c configs/decay_n4.yaml --threads 4
        """,
    )
    decay_parser.add_argument("--n", type=int, default=None, help="Box radius N")
    decay_parser.add_argument("--s", type=float, default=None, help="Moment exponent s in (0, 1)")
    decay_parser.add_argument("--wbar", type=float, default=None, help="Conductance bound W̄")
    decay_parser.add_argument("--y", action="append", default=None, help="Target `x,y` (repeatable)")
    _add_sampler_args(decay_parser)

    verify_parser = subparsers.add_parser("verify", parents=[common], help="Run a verification suite")
    verify_parser.add_argument(
        "suite",
        type=str,
        help="density, moments, tilt, convexity, taylor, deformation, mixture, all (or a suite from config)",
    )

    parser.add_argument(
        "-V",
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    return parser


COMMANDS = {
    "graph": cmd_graph,
    "sample": cmd_sample,
    "vrjp": cmd_vrjp,
    "resistance": cmd_resistance,
    "decay": cmd_decay,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None):
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        sys.exit(0)

    _run(COMMANDS[args.command], args)


if __name__ == "__main__":
    main()
