"""Norm tables over a list of network sizes."""
from dataclasses import dataclass

from .coupling import CouplingKind, coupling_matrix
from .errors import NotHurwitz
from .h2 import h2_norm
from .network import IoShape, assemble, example_node

__all__ = ["TABLE_LAYOUT", "DEFAULT_N_LIST", "TableSpec", "TableRow", "run_table"]

TABLE_LAYOUT = {
    1: (CouplingKind.CONSTRUCTED, IoShape.COLUMN_ROW),
    2: (CouplingKind.ANTISYMMETRIC, IoShape.COLUMN_ROW),
    3: (CouplingKind.CONSTRUCTED, IoShape.BLOCK_DIAGONAL),
    4: (CouplingKind.DIFFUSIVE, IoShape.BLOCK_DIAGONAL),
    5: (CouplingKind.ANTISYMMETRIC, IoShape.BLOCK_DIAGONAL),
}

DEFAULT_N_LIST = (1, 2, 3, 4, 5, 10, 20)


@dataclass(frozen=True)
class TableSpec:
    table_id: int
    example_id: str = "ex1"
    n_list: tuple = DEFAULT_N_LIST
    io: IoShape = None  # overrides the layout's I/O shape when set

    def __post_init__(self):
        if self.table_id not in TABLE_LAYOUT:
            raise ValueError(f"table_id must be one of {sorted(TABLE_LAYOUT)}")
        if self.example_id not in ("ex1", "ex2"):
            raise ValueError("example_id must be 'ex1' or 'ex2'")
        if not self.n_list or any(int(n) != n or n < 1 for n in self.n_list):
            raise ValueError("n_list must hold positive integers")

    @property
    def coupling(self):
        return TABLE_LAYOUT[self.table_id][0]

    @property
    def shape(self):
        if self.io is not None:
            return IoShape(self.io)
        return TABLE_LAYOUT[self.table_id][1]


@dataclass(frozen=True)
class TableRow:
    n: int
    norm: float  # None when unstable
    status: str
    residual: float = 0.0


def run_table(spec, node=None):
    """One :class:`TableRow` per size; unstable networks get status ``unstable``.

    `node` overrides the example selected by ``spec.example_id``.
    """
    if node is None:
        node = example_node(spec.example_id)
    rows = []
    for n in spec.n_list:
        net = assemble(node, coupling_matrix(spec.coupling, n), spec.shape)
        try:
            res = h2_norm(net)
        except NotHurwitz:
            rows.append(TableRow(n, None, "unstable"))
            continue
        rows.append(TableRow(n, res.norm, "ok", res.residual))
    return rows
