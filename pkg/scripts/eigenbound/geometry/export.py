from eigenbound.geometry.mesh import Mesh
from eigenbound.utils.path_utils import ensure_dir


def write_mesh_text(mesh: Mesh, path: str) -> str:
    """Debug dump: one "x y" line per node, then one zero-based "i j k" line per triangle."""
    ensure_dir(path)
    with open(path, "w", newline="\n") as f:
        for x, y in mesh.nodes:
            f.write(f"{x:.17g} {y:.17g}\n")
        for i, j, k in mesh.triangles:
            f.write(f"{i} {j} {k}\n")
    return path


def read_mesh_text(path: str):
    """Inverse of ``write_mesh_text``; returns (nodes, triangles) lists.
    Lines are told apart by their field count."""
    nodes, triangles = [], []
    with open(path) as f:
        for number, line in enumerate(f, start=1):
            fields = line.split()
            if len(fields) == 2 and not triangles:
                nodes.append(tuple(float(v) for v in fields))
            elif len(fields) == 3:
                triangles.append(tuple(int(v) for v in fields))
            elif fields:
                raise ValueError(f"{path}:{number}: expected an 'x y' or 'i j k' line, got {line.strip()!r}")
    return nodes, triangles
