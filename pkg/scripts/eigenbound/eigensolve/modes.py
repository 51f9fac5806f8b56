from dataclasses import dataclass

import numpy as np

from eigenbound.geometry.mesh import Mesh
from eigenbound.fields.drift import DriftField
from eigenbound.fields.tensor import TensorField
from eigenbound.assembly.forms import p1_gradients, weighted_quadrature
from eigenbound.assembly.operators import SparseSymOperator
from eigenbound.eigensolve.solver import Spectrum


@dataclass(frozen=True, eq=False)
class ModeQuantities:
    """Per-mode ||div_eta u||^2, int <T grad u, grad u> dm and ||T grad u||^2."""

    divnorm: np.ndarray
    t_energy: np.ndarray
    t_gradnorm_sq: np.ndarray


def _component_layout(num_dofs: int, K: SparseSymOperator):
    if num_dofs == K.dimension:
        return K.dof_map, False
    if num_dofs == 2 * K.dimension and K.num_components == 1:
        nodes = np.repeat(K.dof_map[:, 0], 2)
        comps = np.tile(np.arange(2), K.dimension)
        return np.column_stack([nodes, comps]), True
    raise ValueError(f"eigenvectors have {num_dofs} entries, stiffness has {K.dimension} DOFs")


def nodal_values(u: np.ndarray, dof_map: np.ndarray, num_nodes: int) -> np.ndarray:
    """Scatter free-DOF coefficients to (num_nodes, components), zero on the boundary."""
    out = np.zeros((num_nodes, int(dof_map[:, 1].max()) + 1))
    out[dof_map[:, 0], dof_map[:, 1]] = u
    return out


def t_gradnorm_sq(u: np.ndarray, dof_map: np.ndarray, mesh: Mesh, T: TensorField, eta: DriftField) -> float:
    """int |T grad u|^2 e^{-eta}, summed over components."""
    values = nodal_values(u, dof_map, mesh.num_nodes)[mesh.triangles]  # (T, 3, c)
    grad_u = np.einsum("tic,tid->tcd", values, p1_gradients(mesh))
    t_grad = np.einsum("tqab,tcb->tqca", T.matrix(mesh.quad_points), grad_u)
    w = weighted_quadrature(mesh, eta)
    return float(np.einsum("tq,tqca,tqca->", w, t_grad, t_grad))


def mode_quantities(
    spectrum: Spectrum,
    K: SparseSymOperator,
    C: SparseSymOperator | None,
    mesh: Mesh,
    T: TensorField,
    eta: DriftField,
    alpha: float,
) -> ModeQuantities:
    """``K`` may be the scalar stiffness (vector modes are then read per
    component) or the block stiffness; ``C`` is None for scalar problems."""
    num_dofs = spectrum.vectors.shape[0]
    dof_map, stacked = _component_layout(num_dofs, K)
    if C is not None and C.dimension != num_dofs:
        raise ValueError(f"eigenvectors have {num_dofs} entries, coupling has {C.dimension} DOFs")

    divnorm, energy, gradnorm = [], [], []
    for u in spectrum.vectors.T:
        if stacked:
            pairs = u.reshape(-1, 2)
            energy.append(K.quadratic_form(pairs[:, 0]) + K.quadratic_form(pairs[:, 1]))
        else:
            energy.append(K.quadratic_form(u))
        divnorm.append(0.0 if C is None else C.quadratic_form(u))
        gradnorm.append(t_gradnorm_sq(u, dof_map, mesh, T, eta))
    return ModeQuantities(
        divnorm=np.asarray(divnorm),
        t_energy=np.asarray(energy),
        t_gradnorm_sq=np.asarray(gradnorm),
    )
