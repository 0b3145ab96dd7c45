"""Exception types shared across the library.

Errors fall into two groups: structural problems with the input
(raised eagerly) and search-budget violations from the brute-force
oracles. Pipeline-level negative verdicts are NOT exceptions; see
the Infeasible result values in the algorithm modules.
"""

from __future__ import annotations


class MlpError(Exception):
    """Base class for all library errors."""


class StructureError(MlpError):
    """The graph does not have the shape an operation requires."""


class ParallelEdgesError(StructureError):
    """Parallel edges are representable but rejected by planarity operations."""


class MissingRotation(StructureError):
    """An embedding-dependent operation was called without a rotation system."""


class MissingOuterFace(StructureError):
    """An embedding-dependent operation needs a designated outer face."""


class NonPlanarRotation(MlpError):
    """Face traversal of the rotation system violates Euler's formula."""


class CyclicGraph(MlpError):
    """A directed cycle where a DAG is required.

    Attributes:
        cycle: one offending directed cycle as a vertex list.
    """

    def __init__(self, cycle: list):
        super().__init__(f"graph contains a directed cycle: {cycle}")
        self.cycle = list(cycle)


class EmptyLevelSet(MlpError):
    """A vertex whose admissible level set is empty.

    Attributes:
        vertex: the first infeasible vertex in topological order.
    """

    def __init__(self, vertex):
        super().__init__(f"empty level set at {vertex!r}")
        self.vertex = vertex


class DirectedCycle(MlpError):
    """An oriented cycle whose edges all point the same way around."""


class AmbiguousTop(MlpError):
    """The top vertex of an inner face is not unique (implementation bug trap)."""


class SearchSpaceTooLarge(MlpError):
    """A brute-force search would exceed its configured cap.

    Attributes:
        size: the computed size of the search space.
        cap: the configured cap it exceeds.
    """

    def __init__(self, size: int, cap: int):
        super().__init__(f"search space of size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class InvalidDrawing(MlpError):
    """A drawing handed to an extraction map fails validation."""


class LayoutError(MlpError):
    """A rectilinear clause layout is inconsistent (crossing nest depths)."""


class ParseError(MlpError):
    """Instance or drawing text is not well-formed.

    Attributes:
        line, column: position of the syntax error when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        pos = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + pos)
        self.line = line
        self.column = column


class SchemaError(MlpError):
    """A document violates the instance schema.

    Attributes:
        field: dotted path of the offending field.
    """

    def __init__(self, message: str, field: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InternalError(MlpError):
    """A guaranteed-impossible condition occurred; always a bug."""
