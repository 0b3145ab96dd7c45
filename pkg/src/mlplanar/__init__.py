"""Multilevel-planarity testing and certified level drawings."""

from .errors import (
    AmbiguousTop,
    CyclicGraph,
    DirectedCycle,
    EmptyLevelSet,
    InternalError,
    InvalidDrawing,
    LayoutError,
    MissingOuterFace,
    MissingRotation,
    MlpError,
    NonPlanarRotation,
    ParallelEdgesError,
    ParseError,
    SchemaError,
    SearchSpaceTooLarge,
    StructureError,
)
from .graph import (
    Dart,
    EmbeddedDigraph,
    Face,
    FaceSet,
    StructureInfo,
    classify_structure,
    compute_faces,
    topological_order,
)
from .levels import (
    IntervalSet,
    LevelAssignment,
    MultilevelAssignment,
    from_level_assignment,
    full_range,
    min_assignment,
    normalize,
)
from .leveldraw import (
    Drawing,
    Report,
    check_drawing,
    level_planar_draw_st,
    make_proper,
)

__version__ = "0.1.0"
