"""Combinatorial game values over outcome posets, with Hex applications."""
from .errors import (
    HexcgtError,
    InternalConsistencyError,
    InvalidArgumentError,
    ParseError,
    PreconditionError,
    PropertyViolation,
    ResourceLimitError,
    UnsupportedPosetError,
)
from .game_core import Universe, universe_for
from .poset import (
    Poset,
    antichain_poset,
    linear_poset,
    non_crossing_poset,
    opposite_poset,
    parse_poset,
    product_poset,
)

__version__ = "0.1.0"
