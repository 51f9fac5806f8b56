import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lobpcg

from eigenbound.assembly.operators import SparseSymOperator

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 42
DEFAULT_MAX_ITER = 5000
DENSE_LIMIT = 3000
_ITERATIONS_PER_RESTART = 250


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residuals):
        super().__init__(message)
        self.residuals = np.asarray(residuals, dtype=float)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """k smallest eigenpairs of A u = sigma M u; ``vectors`` are M-orthonormal columns."""

    sigmas: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    method: str
    tol: float
    iterations: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.sigmas.shape[0]

    @property
    def converged(self) -> bool:
        return bool(np.all(self.residuals <= self.tol))


def operator_scale(A) -> float:
    """Largest absolute row sum of A."""
    return float(np.max(np.asarray(abs(A).sum(axis=1))))


def relative_residuals(A, M, sigmas: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """||A u - sigma M u|| / (||A||_inf ||u||_M) per column."""
    Au = A @ vectors
    Mu = M @ vectors
    num = np.linalg.norm(Au - Mu * sigmas[None, :], axis=0)
    m_norms = np.sqrt(np.einsum("ij,ij->j", vectors, Mu))
    return num / (operator_scale(A) * m_norms)


def rayleigh_quotient(A: SparseSymOperator, M: SparseSymOperator, x) -> float:
    return A.quadratic_form(x) / M.quadratic_form(x)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs[None, :]


def _orthonormalize_clusters(M, sigmas: np.ndarray, vectors: np.ndarray, tol: float) -> np.ndarray:
    """M-orthonormalize each run of eigenvalues closer than tol * sigma."""
    out = vectors.copy()
    start = 0
    for i in range(1, len(sigmas) + 1):
        if i < len(sigmas) and sigmas[i] - sigmas[i - 1] < tol * abs(sigmas[i - 1]):
            continue
        block = out[:, start:i]
        gram = block.T @ (M @ block)
        chol = np.linalg.cholesky(0.5 * (gram + gram.T))
        out[:, start:i] = scipy.linalg.solve_triangular(chol, block.T, lower=True).T
        start = i
    return out


def _rayleigh_ritz(A, M, basis: np.ndarray):
    a = basis.T @ (A @ basis)
    m = basis.T @ (M @ basis)
    vals, vecs = scipy.linalg.eigh(0.5 * (a + a.T), 0.5 * (m + m.T))
    return vals, basis @ vecs


def _solve_dense(A, M, k: int):
    vals, vecs = scipy.linalg.eigh(A.toarray(), M.toarray(), subset_by_index=[0, k - 1])
    return vals, vecs, 0


def _solve_iterative(A, M, k: int, tol: float, seed: int, max_iter: int):
    dim = A.shape[0]
    block = max(k, min(k + max(8, k), dim // 5))
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((dim, block))
    precond = sp.diags(1.0 / A.diagonal())

    # Ritz vectors are M-normalized
    target = 0.5 * tol * operator_scale(A)
    iterations = 0
    vals, X = _rayleigh_ritz(A, M, X)
    residuals = relative_residuals(A, M, vals[:k], X[:, :k])
    while iterations < max_iter:
        chunk = min(_ITERATIONS_PER_RESTART, max_iter - iterations)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            _, X, history = lobpcg(
                A,
                X,
                B=M,
                M=precond,
                tol=target,
                maxiter=chunk,
                largest=False,
                retResidualNormsHistory=True,
            )
        iterations += max(len(history), 1)
        vals, X = _rayleigh_ritz(A, M, X)
        residuals = relative_residuals(A, M, vals[:k], X[:, :k])
        logger.debug("lobpcg: %d iterations, max residual %.3e", iterations, residuals.max())
        if residuals.max() <= tol:
            return vals[:k], X[:, :k], iterations

    raise ConvergenceError(
        f"lobpcg did not reach tol={tol:g} in {max_iter} iterations "
        f"(max residual {residuals.max():.3e})",
        residuals,
    )


def solve_smallest(
    A: SparseSymOperator,
    M: SparseSymOperator,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    max_iter: int = DEFAULT_MAX_ITER,
    dense_limit: int = DENSE_LIMIT,
) -> Spectrum:
    """
    Args:
        A, M: symmetric positive definite operators over the same DOFs.
        k: number of eigenpairs, 1 <= k < dimension.
        tol: bound on the relative residual of every returned pair.
        seed: seed of the random starting block of the iterative path.
        max_iter: iteration cap of the iterative path.
        dense_limit: dimensions up to this use the dense reference solver.
    """
    if A.dimension != M.dimension:
        raise ValueError(f"A and M differ in dimension: {A.dimension} != {M.dimension}")
    if not 1 <= k < A.dimension:
        raise ValueError(f"need 1 <= k < dimension={A.dimension}, got k={k}")

    a = A.matrix()
    m = M.matrix()
    if A.dimension <= dense_limit:
        method = "dense"
        sigmas, vectors, iterations = _solve_dense(a, m, k)
    else:
        method = "lobpcg"
        sigmas, vectors, iterations = _solve_iterative(a, m, k, tol, seed, max_iter)

    vectors = _orthonormalize_clusters(m, sigmas, vectors, tol)
    vectors = _fix_signs(vectors)
    residuals = relative_residuals(a, m, sigmas, vectors)
    if residuals.max() > tol:
        raise ConvergenceError(
            f"{method} solve left max residual {residuals.max():.3e} above tol={tol:g}",
            residuals,
        )
    logger.info(
        "%s solve: dim=%d k=%d sigma_1=%.10g max residual=%.2e",
        method,
        A.dimension,
        k,
        sigmas[0],
        residuals.max(),
    )
    return Spectrum(
        sigmas=np.asarray(sigmas, dtype=float),
        vectors=vectors,
        residuals=residuals,
        method=method,
        tol=tol,
        iterations=iterations,
        metadata={"dimension": A.dimension, "seed": seed},
    )
