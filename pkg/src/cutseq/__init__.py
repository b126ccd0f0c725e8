"""Cutting sequences of straight lines on square-tiled surfaces."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import Permutation, QuadNum, cycle_lcm, parse_number, perm_from_cycles, quad_compare
from .characterize import (
    Verdict,
    Walk,
    check_consistent,
    combinatorial_lift,
    contract,
    decide_parametric,
    decide_window,
    detect_bad_symmetry,
    expand,
    labels_determine_edges,
    recurrence_check,
)
from .gamma import (
    FZReport,
    GammaGraph,
    build_gamma,
    derive_graph,
    fz_check,
    is_strongly_connected,
    prefix_suffix_sets,
)
from .iet import (
    IETSpec,
    SkewState,
    build_iet,
    conjugated_iet,
    cylinder_length,
    idoc_check,
    iet_apply,
    irreducibility_check,
    skew_step,
    symbolic_trajectory,
)
from .oracle import GeoState, TraceResult, first_return_oracle, trace
from .surface import (
    CutSym,
    EdgeLetter,
    LabeledSeq,
    Surface,
    act,
    build_surface,
    classify_squares,
    quadrant_transform,
)
from .torusword import (
    EWord,
    SlopeParams,
    SymmetryVerdict,
    check_balanced,
    classify_symmetry,
    complexity,
    derive_once,
    recover_cf,
    slope_params,
)

__all__ = [name for name in dir() if not name.startswith("_")]
