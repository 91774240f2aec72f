"""Deterministic 2-ruling sets in simulated linear-memory MPC and the Congested Clique."""

from .derand import (
    ChunkSchedule,
    SamplerParams,
    check_precondition,
    conditional_psi_sum,
    distributed_fix_seed,
    fix_seed,
    psi_of_seed,
    select_parameters,
)
from .errors import (
    BandwidthViolation,
    CapacityViolation,
    ModelViolation,
    PreconditionFailed,
    RulingSetError,
)
from .graph import Coloring, Graph, is_two_ruling_set, read_edge_list, write_edge_list
from .kwise import FamilyParams, Seed, evaluate, joint_distribution
from .linial import linial_reduce, reduce_to_fixpoint
from .mpc import ModelConfig, Simulator, gather_subgraph, run_program
from .oracle import enumerate_expectation, verify_kwise, verify_monotone_trace
from .ruling import RunConfig, deterministic_two_ruling_set

__all__ = [
    "BandwidthViolation", "CapacityViolation", "ChunkSchedule", "Coloring", "FamilyParams",
    "Graph", "ModelConfig", "ModelViolation", "PreconditionFailed", "RulingSetError", "RunConfig",
    "SamplerParams", "Seed", "Simulator", "check_precondition", "conditional_psi_sum",
    "deterministic_two_ruling_set", "distributed_fix_seed", "enumerate_expectation", "evaluate",
    "fix_seed", "gather_subgraph", "is_two_ruling_set", "joint_distribution", "linial_reduce",
    "psi_of_seed", "read_edge_list", "reduce_to_fixpoint", "run_program", "select_parameters",
    "verify_kwise", "verify_monotone_trace", "write_edge_list",
]
