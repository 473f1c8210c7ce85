"""Plain-text node-system and matrix files.

Node file layout (whitespace separated, ``#`` starts a comment)::

    n m l
    <n rows of n reals>   A1
    <n rows of m reals>   B1
    <l rows of n reals>   C1

The inner coupling is always recomputed as ``B1 @ C1``.
"""
from pathlib import Path

import numpy as np

from .errors import DimensionError, ParseError
from .network import NodeSystem, example_node

__all__ = [
    "parse_node_text",
    "parse_node_file",
    "format_node",
    "parse_matrix_text",
    "parse_matrix_file",
    "load_node",
]


def _rows(text):
    """Yield (line_number, tokens) for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _floats(tokens, lineno):
    try:
        return [float(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"not a number: {exc}", lineno) from None


def _read_block(rows, n_rows, n_cols, name, last_line):
    block = []
    for _ in range(n_rows):
        try:
            lineno, tokens = next(rows)
        except StopIteration:
            raise ParseError(
                f"{name}: expected {n_rows} rows, file ended after {len(block)}", last_line
            ) from None
        vals = _floats(tokens, lineno)
        if len(vals) != n_cols:
            raise DimensionError(f"{name}: expected {n_cols} entries, got {len(vals)}", lineno)
        block.append(vals)
        last_line = lineno
    return np.array(block), last_line


def parse_node_text(text):
    rows = _rows(text)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError("empty node file", 1) from None
    if len(header) != 3:
        raise ParseError("header must be 'n m l'", lineno)
    try:
        n, m, l = (int(t) for t in header)
    except ValueError:
        raise ParseError("header dimensions must be integers", lineno) from None
    if min(n, m, l) < 1:
        raise DimensionError("dimensions must be positive", lineno)
    if m != l:
        raise DimensionError(f"B1 C1 needs m == l, got m={m}, l={l}", lineno)
    a1, lineno = _read_block(rows, n, n, "A1", lineno)
    b1, lineno = _read_block(rows, n, m, "B1", lineno)
    c1, lineno = _read_block(rows, l, n, "C1", lineno)
    extra = next(rows, None)
    if extra is not None:
        raise ParseError("unexpected trailing data", extra[0])
    return NodeSystem(a1, b1, c1)


def parse_node_file(path):
    return parse_node_text(Path(path).read_text(encoding="utf-8"))


def _fmt(v):
    return repr(float(v))


def format_node(node, comment=None):
    """Serialize `node` so that :func:`parse_node_text` restores it exactly."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{node.order} {node.n_inputs} {node.n_outputs}")
    for block in (node.a1, node.b1, node.c1):
        lines.extend(" ".join(_fmt(v) for v in row) for row in block)
    return "\n".join(lines) + "\n"


def parse_matrix_text(text):
    """Square matrix, one row per line."""
    block = [(lineno, _floats(tokens, lineno)) for lineno, tokens in _rows(text)]
    if not block:
        raise ParseError("empty matrix file", 1)
    size = len(block)
    for lineno, row in block:
        if len(row) != size:
            raise DimensionError(f"expected {size} entries for a square matrix, got {len(row)}", lineno)
    return np.array([row for _, row in block])


def parse_matrix_file(path):
    return parse_matrix_text(Path(path).read_text(encoding="utf-8"))


def load_node(spec):
    """Node from a file path, or one of the built-in names ``ex1`` / ``ex2``."""
    if str(spec) in ("ex1", "ex2") and not Path(str(spec)).exists():
        return example_node(str(spec))
    return parse_node_file(spec)
