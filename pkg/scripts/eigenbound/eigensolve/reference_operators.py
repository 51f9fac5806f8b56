import numpy as np
import scipy.sparse as sp

from eigenbound.assembly.operators import SparseSymOperator


def _scalar_dofs(n: int) -> np.ndarray:
    return np.column_stack([np.arange(n), np.zeros(n, dtype=int)])


def identity_operator(n: int) -> SparseSymOperator:
    return SparseSymOperator(sp.identity(n, format="csr"), _scalar_dofs(n), "identity")


def fd_laplacian_1d(num_points: int, length: float = 1.0):
    """(A, M) for -u'' = sigma u on (0, length) with Dirichlet ends and
    ``num_points`` interior points; M is the identity."""
    h = length / (num_points + 1)
    main = np.full(num_points, 2.0 / h**2)
    sub = np.full(num_points - 1, -1.0 / h**2)
    lower = sp.diags([sub, main], [-1, 0], format="csr")
    return SparseSymOperator(lower, _scalar_dofs(num_points), "fd_laplacian"), identity_operator(num_points)


def fd_laplacian_1d_eigenvalues(num_points: int, length: float = 1.0) -> np.ndarray:
    h = length / (num_points + 1)
    j = np.arange(1, num_points + 1)
    return (2.0 / h**2) * (1.0 - np.cos(j * np.pi * h / length))
