import argparse

from eigenbound.utils.scenarios import BuiltinCase


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="Directory the run writes its artifacts to (default: the config output_dir, or `output`)",
    )
    parser.add_argument(
        "--log_level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level of the eigenbound loggers",
    )


def get_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="eigenbound",
        description="Eigenvalue inequalities for weighted divergence-form elliptic operators",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one experiment described by a JSON config")
    run.add_argument("--config", type=str, required=True, help="Path to the experiment JSON config")
    run.add_argument(
        "--plots",
        action="store_true",
        help="Also write margins.svg (overrides emit_plots in the config)",
    )
    _add_common(run)

    builtin = commands.add_parser("builtin", help="Run a pinned builtin case, or `all` of them")
    builtin.add_argument(
        "case",
        type=str,
        help="One of " + ", ".join(c.value for c in BuiltinCase) + ", or `all`",
    )
    builtin.add_argument(
        "--num_workers",
        type=int,
        default=1,
        help="Number of processes used by `builtin all` (1 runs the cases in order)",
    )
    builtin.add_argument(
        "--timeout",
        type=float,
        default=None,
        help="Per-case timeout in seconds for `builtin all` with several workers",
    )
    builtin.add_argument("--plots", action="store_true", help="Also write margins.svg per case")
    _add_common(builtin)

    dump = commands.add_parser(
        "dump-matrices", help="Write the assembled operators of a config as coordinate text"
    )
    dump.add_argument("--config", type=str, required=True, help="Path to the experiment JSON config")
    _add_common(dump)

    args = parser.parse_args(argv)
    if getattr(args, "num_workers", 1) < 1:
        parser.error("--num_workers must be at least 1")
    return args


def test():
    args = get_args()
    print(args)


if __name__ == "__main__":
    test()
