from eigenbound.eigensolve.solver import (
    ConvergenceError,
    Spectrum,
    rayleigh_quotient,
    relative_residuals,
    solve_smallest,
)
from eigenbound.eigensolve.modes import ModeQuantities, mode_quantities, nodal_values
from eigenbound.eigensolve.reference_operators import (
    fd_laplacian_1d,
    fd_laplacian_1d_eigenvalues,
    identity_operator,
)
