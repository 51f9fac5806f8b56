"""Per-mode consistency checks phrased as reports, so they share the exit-status logic."""
import numpy as np

from eigenbound.bounds.inputs import DEFAULT_SLACK
from eigenbound.bounds.reports import BoundReport, make_report

MODE_CHECK_TOL = 1e-10
ORACLE_TOLERANCE = 5e-3


def eval_mode_checks(
    sigmas,
    divnorms,
    t_energy,
    t_gradnorm_sq,
    alpha: float,
    delta: float,
    slack: float = DEFAULT_SLACK,
) -> list[BoundReport]:
    """Energy identity sigma_i = energy_i + alpha divnorm_i and the gradient bound
    ||T grad u_i||^2 <= delta (sigma_i - alpha divnorm_i), both with 1e-10 relative tolerance."""
    reports = []
    for i, (s, d, e, g) in enumerate(zip(sigmas, divnorms, t_energy, t_gradnorm_sq), start=1):
        reports.append(
            make_report("energy_identity", "mode_checks", i, abs(s - (e + alpha * d)), MODE_CHECK_TOL * s, slack)
        )
        reports.append(
            make_report(
                "gradient_bound", "mode_checks", i, g, delta * (s - alpha * d) + MODE_CHECK_TOL * s, slack
            )
        )
    return reports


def eval_oracle_agreement(
    fem_sigmas, oracle_sigmas, tolerance: float = ORACLE_TOLERANCE, slack: float = DEFAULT_SLACK
) -> list[BoundReport]:
    """Relative difference of each FEM eigenvalue from the radial oracle."""
    fem = np.asarray(fem_sigmas, dtype=float)
    oracle = np.asarray(oracle_sigmas, dtype=float)
    count = min(fem.size, oracle.size)
    rel = np.abs(fem[:count] - oracle[:count]) / np.abs(oracle[:count])
    return [
        make_report("oracle_agreement", "crosscheck", i + 1, rel[i], tolerance, slack)
        for i in range(count)
    ]
