"""Interval-based ancestry labeling schemes for rooted trees."""

from .approx import (
    KAnnotatedAssignment,
    SchemeParams,
    assign_new,
    check_new_invariants,
    decode_new,
    encode_new,
    k_of_m,
    recover_z,
    round_up_to_S,
    s_of_k,
)
from .classic import assign_classic, decode_classic, encode_classic
from .errors import (
    AncestryError,
    BadSpec,
    BadSplit,
    EmptyInput,
    LabelFormat,
    LabelOverflow,
    MalformedTree,
    RangeExceeded,
    StrategyViolation,
)
from .framework import (
    AssignmentReport,
    IntervalAssignment,
    assign,
    check_basic_property,
    check_left_including,
    check_necessary_conditions,
    check_sufficient_conditions,
    recompute_extrema,
)
from .generators import GenSpec, enumerate_all, generate
from .labels import Label, concat, pack, split, unpack
from .tree import (
    RootedTree,
    children_by_subtree_size,
    from_edge_list,
    from_parent_array,
    is_ancestor_oracle,
)

__version__ = "0.1.0"
