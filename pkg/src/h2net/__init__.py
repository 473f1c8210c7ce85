"""H2-norm energy of linearly coupled networks of identical linear nodes."""
from .coupling import (
    CouplingKind,
    build_antisymmetric,
    build_constructed,
    build_diffusive,
    coupling_matrix,
    coupling_spectrum,
    predicted_spectrum,
    verify_jordan_structure,
)
from .h2 import (
    H2Result,
    antisym_first_order_prediction,
    diffusive_norm_prediction,
    h2_norm,
    lyapunov_solve,
    node_h2_norm,
)
from .network import (
    IoShape,
    NetworkRealization,
    NodeSystem,
    assemble,
    example_node,
    reduce_even,
    reduce_odd,
    stable_by_coupling_spectrum,
)

__version__ = "0.1.0"
