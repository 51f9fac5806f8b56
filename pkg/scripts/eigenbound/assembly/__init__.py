from eigenbound.assembly.operators import (
    AssemblyError,
    SparseSymOperator,
    block_diagonal,
    write_coordinate_text,
)
from eigenbound.assembly.forms import (
    DiscreteSystem,
    assemble_mass,
    assemble_stiffness,
    assemble_coupling,
    assemble_system,
    assemble_vector_system,
    p1_gradients,
)
