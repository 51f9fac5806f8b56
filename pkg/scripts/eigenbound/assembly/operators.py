from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from eigenbound.utils.path_utils import ensure_dir


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SparseSymOperator:
    """Symmetric sparse operator stored as its lower triangle.

    The operator is *defined* as ``L + tril(L, -1).T``, so symmetry holds at the
    storage level. ``dof_map[i] = (mesh node, component)`` for free DOF ``i``.
    """

    lower: sp.csr_matrix
    dof_map: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.lower.shape[0] != self.lower.shape[1]:
            raise AssemblyError(f"operator must be square, got {self.lower.shape}")
        if sp.triu(self.lower, k=1).nnz:
            raise AssemblyError("only the lower triangle may be stored")
        if self.dof_map.shape != (self.lower.shape[0], 2):
            raise AssemblyError("dof_map must have one (node, component) row per DOF")

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @property
    def num_components(self) -> int:
        return int(self.dof_map[:, 1].max()) + 1 if self.dimension else 1

    def matrix(self) -> sp.csr_matrix:
        strict = sp.tril(self.lower, k=-1)
        full = (self.lower + strict.T).tocsr()
        full.sort_indices()
        return full

    def dense(self) -> np.ndarray:
        return self.matrix().toarray()

    def diagonal(self) -> np.ndarray:
        return self.lower.diagonal()

    def bilinear(self, f, g) -> float:
        """f^T A g from the stored triangle; swapping f and g gives the same bits."""
        f = np.asarray(f, dtype=float)
        g = np.asarray(g, dtype=float)
        strict = sp.tril(self.lower, k=-1).tocoo()
        r, c, v = strict.row, strict.col, strict.data
        off = np.sum(v * (f[r] * g[c] + f[c] * g[r]))
        return float(off + np.sum(self.diagonal() * (f * g)))

    def quadratic_form(self, u) -> float:
        return self.bilinear(u, u)

    def apply(self, u) -> np.ndarray:
        return self.matrix() @ np.asarray(u, dtype=float)

    def scaled(self, factor: float) -> "SparseSymOperator":
        return SparseSymOperator((factor * self.lower).tocsr(), self.dof_map, self.name)

    def plus(self, other: "SparseSymOperator", factor: float = 1.0) -> "SparseSymOperator":
        if not np.array_equal(self.dof_map, other.dof_map):
            raise AssemblyError(f"cannot add {other.name} to {self.name}: DOF orderings differ")
        return SparseSymOperator((self.lower + factor * other.lower).tocsr(), self.dof_map, self.name)


def from_local_blocks(local: np.ndarray, dofs: np.ndarray, size: int) -> sp.csr_matrix:
    """Sum per-element blocks ``local[t]`` on ``dofs[t]`` and keep the lower triangle."""
    m = dofs.shape[1]
    rows = np.broadcast_to(dofs[:, :, None], (dofs.shape[0], m, m)).ravel()
    cols = np.broadcast_to(dofs[:, None, :], (dofs.shape[0], m, m)).ravel()
    full = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(size, size)).tocsr()
    full.sum_duplicates()
    return sp.tril(full, format="csr")


def restrict(lower: sp.csr_matrix, free_nodes: np.ndarray, num_components: int, name: str, eliminate: bool):
    """Dirichlet elimination: keep rows and columns of free DOFs only."""
    num_nodes = lower.shape[0] // num_components
    nodes = free_nodes if eliminate else np.arange(num_nodes)
    dofs = (nodes[:, None] * num_components + np.arange(num_components)).ravel()
    kept = lower[dofs][:, dofs].tocsr()
    kept.sort_indices()
    dof_map = np.column_stack([dofs // num_components, dofs % num_components])
    return SparseSymOperator(kept, dof_map, name)


def block_diagonal(op: SparseSymOperator, num_components: int = 2) -> SparseSymOperator:
    """blockdiag(op, op) in node-major, component-minor DOF order."""
    lower = sp.kron(op.lower, sp.identity(num_components), format="csr")
    nodes = np.repeat(op.dof_map[:, 0], num_components)
    comps = np.tile(np.arange(num_components), op.dimension)
    return SparseSymOperator(lower, np.column_stack([nodes, comps]), op.name)


def write_coordinate_text(op: SparseSymOperator, path: str) -> str:
    """Writes one zero-based "row col value" line per stored entry of the full matrix."""
    ensure_dir(path)
    coo = op.matrix().tocoo()
    with open(path, "w", newline="\n") as f:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            f.write(f"{r} {c} {v:.17g}\n")
    return path
