"""Exact Farey sequences, Farey rank tables and rank-based digital geometry."""

from .errors import (
    CacheRejected,
    DegenerateObject,
    FareyError,
    InputFormatError,
    InvalidArgument,
    InvalidDenominator,
    InvalidOrder,
    NoObject,
    OpenPolygonUnsupported,
    OutOfTable,
    RankOutOfRange,
    ZeroVector,
)
from .sequence import (
    FareySequence,
    Fraction,
    compare,
    fraction_at_rank,
    generate_sequence,
    make_fraction,
    mediant,
    sequence_size,
)
from .table import (
    DirectionTable,
    FareyTable,
    build_directions,
    build_table,
    check_table_properties,
    direction_index,
    direction_table,
    rank_of,
)
from .search import (
    SearchKey,
    SearchResult,
    bench_iterations,
    bracket_range,
    closest_binary,
    closest_bruteforce,
    closest_regula_falsi,
)
from .geometry import (
    ApproxConfig,
    DigitalContour,
    Polygon,
    approximate_polygon,
    deviation_of,
    is_collinear,
    trace_boundary,
)
from .shape import ShapeDescriptor, compare_cyclic, descriptor_of, index_to_degrees

__version__ = "0.1.0"
