import sys
import logging

from eigenbound.assembly.operators import write_coordinate_text
from eigenbound.bounds.inputs import BoundInputError
from eigenbound.eigensolve.solver import ConvergenceError
from eigenbound.geometry.export import write_mesh_text
from eigenbound.radial_oracle import OracleResolutionError
from eigenbound.runner.cases import builtin_config, builtin_names
from eigenbound.runner.config import ConfigError, load_config
from eigenbound.runner.outputs import write_outputs
from eigenbound.runner.parser import get_args
from eigenbound.runner.scenario_router import build_system, run_config
from eigenbound.utils.multiprocess import run_jobs_in_parallel
from eigenbound.utils.path_utils import get_case_output_dir, get_output_path

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2

DEFAULT_OUT = "output"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(__name__)


def run_experiment(config, out_dir: str, plots: bool = False) -> int:
    result = run_config(config)
    for path in write_outputs(result, out_dir, plots or config.emit_plots):
        print(f"Wrote {path}")
    violated = sum(not r.satisfied for r in result.reports)
    print(
        f"{config.name}: {len(result.reports)} reports, {violated} violated, "
        f"max residual {result.residuals.max():.3e} ({result.method})"
    )
    return result.exit_status


def run_builtin_job(job) -> int:
    """Single picklable argument so the worker pool can map over cases."""
    case, out_dir, nested, plots, log_level = job
    logging.basicConfig(level=log_level, format=LOG_FORMAT)
    return run_experiment(builtin_config(case), get_case_output_dir(out_dir, case, nested), plots)


def _run_builtin(args) -> int:
    names = builtin_names()
    if args.case != "all" and args.case not in names:
        print(f"Unknown case {args.case!r}; available: {', '.join(names)}, all", file=sys.stderr)
        return EXIT_ERROR

    cases = names if args.case == "all" else [args.case]
    nested = len(cases) > 1
    out_dir = args.out or DEFAULT_OUT
    jobs = [(case, out_dir, nested, args.plots, args.log_level) for case in cases]
    if args.num_workers == 1 or len(jobs) == 1:
        return max(_guarded(run_builtin_job, job) for job in jobs)

    status = EXIT_OK
    results = run_jobs_in_parallel(
        run_builtin_job,
        jobs,
        num_workers=args.num_workers,
        timeout_per_job=args.timeout,
        use_progress_bar=True,
        progress_bar_desc="builtin cases",
    )
    for job_result in results:
        case = job_result.job[0]
        if job_result.is_success():
            print(f"{case}: exit {job_result.result}")
            status = max(status, job_result.result)
        else:
            print(f"{case}: failed ({job_result.status.name})\n{job_result.exception_tb}", file=sys.stderr)
            status = EXIT_ERROR
    return status


def _guarded(func, job) -> int:
    try:
        return func(job)
    except (ConfigError, BoundInputError, ConvergenceError, OracleResolutionError, ValueError) as e:
        print(f"{job[0]}: {e}", file=sys.stderr)
        return EXIT_ERROR


def _dump_matrices(args) -> int:
    config = load_config(args.config)
    mesh, system = build_system(config)
    out_dir = args.out or config.output_dir
    operators = [system.stiffness, system.mass, system.A, system.M]
    if system.coupling is not None:
        operators.append(system.coupling)
    written = {}
    for name, op in zip(["stiffness", "mass", "A", "M", "coupling"], operators):
        written[name] = write_coordinate_text(op, get_output_path(out_dir, f"{name}.txt"))
    written["mesh"] = write_mesh_text(mesh, get_output_path(out_dir, "mesh.txt"))
    for name, path in written.items():
        print(f"Wrote {name} ({mesh.num_nodes} nodes) to {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = get_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)

    try:
        if args.command == "run":
            config = load_config(args.config)
            return run_experiment(config, args.out or config.output_dir, args.plots)
        elif args.command == "builtin":
            return _run_builtin(args)
        elif args.command == "dump-matrices":
            return _dump_matrices(args)
        else:
            raise ValueError(f"Command {args.command} not implemented")
    except ConvergenceError as e:
        print(f"error: {e}; residuals {e.residuals.tolist()}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
