"""Exact, desk-scale experiments on piercing axis-parallel rectangles with points from a fixed set P."""

from .dinterval import DIntervalFamily, TransversalReport, dinterval_nu, dinterval_tau, kaiser_check, triangle_2interval
from .errors import (
    HypothesisViolation,
    InvalidParameters,
    PierceLabError,
    SolverBudgetExhausted,
    TheoremViolation,
    UnpierceableMember,
)
from .generators import (
    GeneratorExhausted,
    gen_clusters,
    gen_cycle,
    gen_dinterval,
    gen_helly4,
    gen_quadrant,
    gen_random_pairwise,
    gen_random_pq,
    gen_set_system,
    triangle_fixture,
)
from .geom import Point, Quadrant, Rect, classify_quadrant, closed_quadrants, common_intersection, rects_intersect
from .reduction import (
    ChainSystem,
    GuardSet,
    PiercingResult,
    build_chains,
    check_claim_quadrants,
    check_faithfulness,
    interval_family,
    pierce_8,
    pierce_pairwise_p,
    pierce_pq_composite,
    pierce_quadrant_condition_p,
    rect_to_4interval,
    residual_family,
    select_guards,
)
from .serialize import instance_digest, load_dinterval, load_instance, save_dinterval, save_instance
from .solver import (
    SetSystem,
    SolveResult,
    geometric_pierce,
    max_packing,
    min_hitting_set,
    oracle_max_packing,
    oracle_min_hitting_set,
)
from .suite import RunConfig, SuiteReport, run_suite
from .trace import Instance, TraceFamily, has_pq_property, pairwise_trace_witness, subfamily_trace_intersecting, trace
from .verify import PTInstance, VerifyReport, find_disjoint_pair, pt_fixture, verify_halman, verify_pach_tardos

__version__ = "0.1.0"
