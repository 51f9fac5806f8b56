import math
import logging
from dataclasses import dataclass

import numpy as np

from eigenbound.geometry.domains import DomainError, DomainKind, DomainSpec
from eigenbound.geometry.quadrature import quadrature_data, triangle_areas

logger = logging.getLogger(__name__)

OUTER_BOUNDARY = 0
INNER_BOUNDARY = 1


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming P1 triangulation of a planar domain.

    Boundary edges are oriented with the domain on their left, so the outward
    normal of edge (p, q) is the clockwise rotation of q - p.
    """

    spec: DomainSpec
    nodes: np.ndarray  # (N, 2)
    triangles: np.ndarray  # (T, 3), counter-clockwise
    boundary_edges: np.ndarray  # (E, 2)
    boundary_markers: np.ndarray  # (E,), OUTER_BOUNDARY or INNER_BOUNDARY
    boundary_normals: np.ndarray  # (E, 2)
    quad_points: np.ndarray  # (T, Q, 2)
    quad_weights: np.ndarray  # (T, Q)
    h: float

    @property
    def num_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.boundary_edges)

    @property
    def free_nodes(self) -> np.ndarray:
        mask = np.ones(self.num_nodes, dtype=bool)
        mask[self.boundary_nodes] = False
        return np.flatnonzero(mask)

    @property
    def areas(self) -> np.ndarray:
        return triangle_areas(self.nodes, self.triangles)

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    def sample_points(self) -> np.ndarray:
        """Quadrature points plus all mesh nodes, for sups over the closed domain."""
        return np.vstack([self.quad_points.reshape(-1, 2), self.nodes])


def _edge_lengths(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    corners = nodes[triangles]
    return np.linalg.norm(corners - np.roll(corners, -1, axis=1), axis=2)


def _outward_normals(nodes: np.ndarray, edges: np.ndarray) -> np.ndarray:
    d = nodes[edges[:, 1]] - nodes[edges[:, 0]]
    normals = np.column_stack([d[:, 1], -d[:, 0]])
    return normals / np.linalg.norm(normals, axis=1, keepdims=True)


def _assemble(spec, nodes, triangles, boundary_edges, boundary_markers) -> Mesh:
    quad_points, quad_weights = quadrature_data(nodes, triangles)
    return Mesh(
        spec=spec,
        nodes=nodes,
        triangles=triangles,
        boundary_edges=boundary_edges,
        boundary_markers=boundary_markers,
        boundary_normals=_outward_normals(nodes, boundary_edges),
        quad_points=quad_points,
        quad_weights=quad_weights,
        h=float(_edge_lengths(nodes, triangles).max()),
    )


def _rectangle_mesh(spec: DomainSpec, resolution: int) -> Mesh:
    width, height = spec.widths
    base = min(width, height)
    nx = max(resolution, int(round(resolution * width / base)))
    ny = max(resolution, int(round(resolution * height / base)))

    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    X, Y = np.meshgrid(xs, ys)
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def idx(i, j):
        return j * (nx + 1) + i

    I, J = np.meshgrid(np.arange(nx), np.arange(ny))
    n00 = idx(I.ravel(), J.ravel())
    n10 = n00 + 1
    n01 = n00 + nx + 1
    n11 = n01 + 1
    triangles = np.vstack(
        [np.column_stack([n00, n10, n11]), np.column_stack([n00, n11, n01])]
    )

    i = np.arange(nx)
    j = np.arange(ny)
    bottom = np.column_stack([idx(i, 0), idx(i + 1, 0)])
    right = np.column_stack([idx(nx, j), idx(nx, j + 1)])
    top = np.column_stack([idx(i + 1, ny), idx(i, ny)])[::-1]
    left = np.column_stack([idx(0, j + 1), idx(0, j)])[::-1]
    edges = np.vstack([bottom, right, top, left])
    markers = np.full(edges.shape[0], OUTER_BOUNDARY)
    return _assemble(spec, nodes, triangles, edges, markers)


def _polar_mesh(spec: DomainSpec, resolution: int) -> Mesh:
    sectors = math.ceil(2.0 * math.pi * resolution)
    theta = 2.0 * math.pi * np.arange(sectors) / sectors
    ring_dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    s = np.arange(sectors)
    s_next = (s + 1) % sectors

    is_ball = spec.inner_radius == 0.0
    if is_ball:
        radii = spec.outer_radius * np.arange(1, resolution + 1) / resolution
        offset = 1
        rings = [np.zeros((1, 2))]
    else:
        radii = spec.inner_radius + (spec.outer_radius - spec.inner_radius) * (
            np.arange(resolution + 1) / resolution
        )
        offset = 0
        rings = []
    radii[-1] = spec.outer_radius
    rings += [r * ring_dirs for r in radii]
    nodes = np.vstack(rings)

    def ring(k):
        return offset + k * sectors

    blocks = []
    if is_ball:
        blocks.append(np.column_stack([np.zeros(sectors, dtype=int), ring(0) + s, ring(0) + s_next]))
    for k in range(len(radii) - 1):
        a = ring(k) + s
        b = ring(k) + s_next
        c = ring(k + 1) + s
        d = ring(k + 1) + s_next
        blocks.append(np.column_stack([a, c, d]))
        blocks.append(np.column_stack([a, d, b]))
    triangles = np.vstack(blocks)

    last = ring(len(radii) - 1)
    edges = [np.column_stack([last + s, last + s_next])]
    markers = [np.full(sectors, OUTER_BOUNDARY)]
    if not is_ball:
        edges.append(np.column_stack([ring(0) + s_next, ring(0) + s]))
        markers.append(np.full(sectors, INNER_BOUNDARY))
    return _assemble(spec, nodes, triangles, np.vstack(edges), np.concatenate(markers))


def build_mesh(spec: DomainSpec, resolution: int) -> Mesh:
    """Structured triangulation: tensor grid for rectangles, polar grid with
    ``resolution`` radial layers and ceil(2*pi*resolution) sectors otherwise."""
    if resolution < 2:
        raise DomainError(f"resolution must be at least 2, got {resolution}")
    if spec.dim != 2:
        raise DomainError(f"only planar domains can be meshed, got dimension {spec.dim}")
    if spec.kind == DomainKind.rectangle:
        mesh = _rectangle_mesh(spec, resolution)
    else:
        mesh = _polar_mesh(spec, resolution)
    validate_mesh(mesh)
    logger.info(
        "built %s mesh: %d nodes, %d triangles, h=%.4g",
        spec.kind.value,
        mesh.num_nodes,
        mesh.num_triangles,
        mesh.h,
    )
    return mesh


def refine(mesh: Mesh) -> Mesh:
    """Red refinement: every triangle is split into four through its edge
    midpoints; midpoints of curved boundary edges are pushed onto the circle."""
    nodes = mesh.nodes
    tri = mesh.triangles
    num_nodes = nodes.shape[0]

    local_edges = np.stack([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]], axis=1)
    lo = local_edges.min(axis=2)
    hi = local_edges.max(axis=2)
    keys = lo.astype(np.int64) * num_nodes + hi
    unique_keys, inverse = np.unique(keys.ravel(), return_inverse=True)
    inverse = inverse.reshape(-1, 3)

    ends_lo = unique_keys // num_nodes
    ends_hi = unique_keys % num_nodes
    midpoints = 0.5 * (nodes[ends_lo] + nodes[ends_hi])

    b_edges = mesh.boundary_edges
    b_keys = b_edges.min(axis=1).astype(np.int64) * num_nodes + b_edges.max(axis=1)
    b_mid = np.searchsorted(unique_keys, b_keys)
    if mesh.spec.is_curved:
        radius = np.where(
            mesh.boundary_markers == INNER_BOUNDARY,
            mesh.spec.inner_radius,
            mesh.spec.outer_radius,
        )
        pts = midpoints[b_mid]
        midpoints[b_mid] = pts * (radius / np.linalg.norm(pts, axis=1))[:, None]

    new_nodes = np.vstack([nodes, midpoints])
    m01 = num_nodes + inverse[:, 0]
    m12 = num_nodes + inverse[:, 1]
    m20 = num_nodes + inverse[:, 2]
    v0, v1, v2 = tri[:, 0], tri[:, 1], tri[:, 2]
    new_tri = np.vstack(
        [
            np.column_stack([v0, m01, m20]),
            np.column_stack([m01, v1, m12]),
            np.column_stack([m20, m12, v2]),
            np.column_stack([m01, m12, m20]),
        ]
    )

    mid_ids = num_nodes + b_mid
    new_edges = np.empty((2 * b_edges.shape[0], 2), dtype=b_edges.dtype)
    new_edges[0::2] = np.column_stack([b_edges[:, 0], mid_ids])
    new_edges[1::2] = np.column_stack([mid_ids, b_edges[:, 1]])
    new_markers = np.repeat(mesh.boundary_markers, 2)

    refined = _assemble(mesh.spec, new_nodes, new_tri, new_edges, new_markers)
    validate_mesh(refined)
    logger.info("refined mesh: %d triangles, h=%.4g", refined.num_triangles, refined.h)
    return refined


def validate_mesh(mesh: Mesh) -> None:
    """Check positivity, watertight connectivity and unit outward normals."""
    areas = mesh.areas
    if np.any(areas <= 0):
        bad = int(np.flatnonzero(areas <= 0)[0])
        raise DomainError(f"triangle {bad} has non-positive area {areas[bad]:.3e}")

    n = mesh.num_nodes
    tri = mesh.triangles
    edges = np.vstack([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    keys = edges.min(axis=1).astype(np.int64) * n + edges.max(axis=1)
    unique_keys, counts = np.unique(keys, return_counts=True)
    if np.any(counts > 2):
        raise DomainError("an edge is shared by more than two triangles")

    b = mesh.boundary_edges
    b_keys = np.sort(b.min(axis=1).astype(np.int64) * n + b.max(axis=1))
    if not np.array_equal(b_keys, unique_keys[counts == 1]):
        raise DomainError("boundary edges do not match the edges owned by one triangle")
    if b.shape[0] != mesh.boundary_nodes.shape[0]:
        raise DomainError("boundary is not a union of closed loops")

    lengths = np.linalg.norm(mesh.boundary_normals, axis=1)
    if np.max(np.abs(lengths - 1.0)) > 1e-12:
        raise DomainError("boundary normals are not unit vectors")
