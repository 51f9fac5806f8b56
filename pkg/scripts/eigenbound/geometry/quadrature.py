import numpy as np

# Symmetric 6-point rule on the reference triangle, exact for polynomials of
# degree 4. Rows are barycentric coordinates, weights sum to one.
_A1 = 0.44594849091596488632
_W1 = 0.22338158967801146570
_A2 = 0.09157621350977074346
_W2 = 0.10995174365532186764

DEGREE4_BARYCENTRIC = np.array(
    [
        [1.0 - 2.0 * _A1, _A1, _A1],
        [_A1, 1.0 - 2.0 * _A1, _A1],
        [_A1, _A1, 1.0 - 2.0 * _A1],
        [1.0 - 2.0 * _A2, _A2, _A2],
        [_A2, 1.0 - 2.0 * _A2, _A2],
        [_A2, _A2, 1.0 - 2.0 * _A2],
    ]
)
DEGREE4_WEIGHTS = np.array([_W1, _W1, _W1, _W2, _W2, _W2])


def triangle_areas(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Signed areas, positive for counter-clockwise triangles."""
    p0 = nodes[triangles[:, 0]]
    p1 = nodes[triangles[:, 1]]
    p2 = nodes[triangles[:, 2]]
    d1 = p1 - p0
    d2 = p2 - p0
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def quadrature_data(nodes: np.ndarray, triangles: np.ndarray):
    """Physical quadrature points (T, Q, 2) and weights (T, Q)."""
    corners = nodes[triangles]  # (T, 3, 2)
    points = np.einsum("qi,tik->tqk", DEGREE4_BARYCENTRIC, corners)
    weights = triangle_areas(nodes, triangles)[:, None] * DEGREE4_WEIGHTS[None, :]
    return points, weights
