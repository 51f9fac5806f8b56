from eigenbound.geometry.domains import (
    DomainError,
    DomainKind,
    DomainSpec,
    rectangle,
    ball,
    annulus,
    soliton_annulus_spec,
)
from eigenbound.geometry.mesh import Mesh, build_mesh, refine, validate_mesh
from eigenbound.geometry.export import write_mesh_text, read_mesh_text
