from eigenbound.radial_oracle.sturm_liouville import (
    OracleResolutionError,
    RadialProblem,
    RadialSpectrum,
    harmonic_multiplicity,
    radial_branch,
    radial_problem,
    radial_spectrum,
)
