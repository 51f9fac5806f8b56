import logging
from dataclasses import dataclass

import numpy as np

from eigenbound.geometry.mesh import Mesh
from eigenbound.geometry.quadrature import DEGREE4_BARYCENTRIC
from eigenbound.fields.drift import DriftField
from eigenbound.fields.tensor import TensorField
from eigenbound.assembly.operators import (
    AssemblyError,
    SparseSymOperator,
    block_diagonal,
    from_local_blocks,
    restrict,
)

logger = logging.getLogger(__name__)

_REFERENCE_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


def p1_gradients(mesh: Mesh) -> np.ndarray:
    """Constant gradients of the three hat functions on every triangle, (T, 3, 2)."""
    corners = mesh.nodes[mesh.triangles]
    jac = np.stack([corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0]], axis=2)
    return np.einsum("ik,tkj->tij", _REFERENCE_GRADIENTS, np.linalg.inv(jac))


def weighted_quadrature(mesh: Mesh, eta: DriftField) -> np.ndarray:
    return mesh.quad_weights * np.exp(-eta.value(mesh.quad_points))


def _vector_dofs(triangles: np.ndarray) -> np.ndarray:
    return (2 * triangles[:, :, None] + np.arange(2)).reshape(-1, 6)


def _check_spd(T: TensorField, mesh: Mesh) -> np.ndarray:
    tq = T.matrix(mesh.quad_points)
    if T.is_constant:
        lowest = np.linalg.eigvalsh(T.constant_matrix())[0]
        if lowest <= 0:
            raise AssemblyError(f"tensor is not positive definite (eigenvalue {lowest:.3e})")
        return tq
    w = np.linalg.eigvalsh(tq.reshape(-1, 2, 2))[:, 0]
    if np.any(w <= 0):
        bad = mesh.quad_points.reshape(-1, 2)[int(np.argmin(w))]
        raise AssemblyError(f"tensor is not positive definite at x={tuple(bad)}")
    return tq


def _mass_lower(mesh: Mesh, eta: DriftField):
    w = weighted_quadrature(mesh, eta)
    local = np.einsum("tq,qi,qj->tij", w, DEGREE4_BARYCENTRIC, DEGREE4_BARYCENTRIC)
    return from_local_blocks(local, mesh.triangles, mesh.num_nodes)


def _stiffness_lower(mesh: Mesh, T: TensorField, eta: DriftField):
    tq = _check_spd(T, mesh)
    w = weighted_quadrature(mesh, eta)
    grads = p1_gradients(mesh)
    local = np.einsum("tq,tqab,tib,tja->tij", w, tq, grads, grads)
    return from_local_blocks(local, mesh.triangles, mesh.num_nodes)


def _coupling_lower(mesh: Mesh, eta: DriftField):
    w = weighted_quadrature(mesh, eta)
    grads = p1_gradients(mesh)
    grad_eta = eta.gradient(mesh.quad_points)
    # div_eta of the (node i, component c) basis field at each quadrature point
    b = grads[:, None, :, :] - grad_eta[:, :, None, :] * DEGREE4_BARYCENTRIC[None, :, :, None]
    b = b.reshape(b.shape[0], b.shape[1], 6)
    local = np.einsum("tq,tqa,tqb->tab", w, b, b)
    return from_local_blocks(local, _vector_dofs(mesh.triangles), 2 * mesh.num_nodes)


def assemble_mass(mesh: Mesh, eta: DriftField, eliminate: bool = True) -> SparseSymOperator:
    """M_ij = int phi_i phi_j e^{-eta}."""
    return restrict(_mass_lower(mesh, eta), mesh.free_nodes, 1, "mass", eliminate)


def assemble_stiffness(
    mesh: Mesh, T: TensorField, eta: DriftField, eliminate: bool = True
) -> SparseSymOperator:
    """K_ij = int <T grad phi_i, grad phi_j> e^{-eta}."""
    return restrict(_stiffness_lower(mesh, T, eta), mesh.free_nodes, 1, "stiffness", eliminate)


def assemble_coupling(mesh: Mesh, eta: DriftField, eliminate: bool = True) -> SparseSymOperator:
    """C_ab = int div_eta(psi_a) div_eta(psi_b) e^{-eta} over vector hat fields."""
    return restrict(_coupling_lower(mesh, eta), mesh.free_nodes, 2, "coupling", eliminate)


@dataclass(frozen=True, eq=False)
class DiscreteSystem:
    """Everything assembled for one problem; ``A`` and ``M`` define A u = sigma M u.

    For scalar problems ``coupling`` is None and ``A``/``M`` are the scalar forms.
    """

    stiffness: SparseSymOperator
    mass: SparseSymOperator
    coupling: SparseSymOperator | None
    A: SparseSymOperator
    M: SparseSymOperator
    alpha: float

    @property
    def is_vector(self) -> bool:
        return self.coupling is not None


def assemble_system(
    mesh: Mesh,
    T: TensorField,
    eta: DriftField,
    alpha: float = 0.0,
    vector: bool = True,
    eliminate: bool = True,
) -> DiscreteSystem:
    if alpha < 0:
        raise AssemblyError(f"alpha must be non-negative, got {alpha}")
    K = assemble_stiffness(mesh, T, eta, eliminate)
    M = assemble_mass(mesh, eta, eliminate)
    if not vector:
        logger.info("assembled scalar system with %d free DOFs", K.dimension)
        return DiscreteSystem(K, M, None, K, M, alpha)

    C = assemble_coupling(mesh, eta, eliminate)
    A = block_diagonal(K).plus(C, alpha)
    A = SparseSymOperator(A.lower, A.dof_map, "system")
    logger.info("assembled vector system with %d free DOFs (alpha=%g)", A.dimension, alpha)
    return DiscreteSystem(K, M, C, A, block_diagonal(M), alpha)


def assemble_vector_system(
    mesh: Mesh, T: TensorField, eta: DriftField, alpha: float, eliminate: bool = True
):
    """(A, M) with A = blockdiag(K, K) + alpha C and M = blockdiag(M, M)."""
    system = assemble_system(mesh, T, eta, alpha, vector=True, eliminate=eliminate)
    return system.A, system.M
