"""Multilevel constructions of constant dimension codes over small finite fields."""

from .algebra import GF, Subspace, field, rank, rref, subspace_distance
from .assembly import (
    CdcPlan,
    build_plan,
    build_plan_explicit,
    cardinality_theorem32,
    corollary_bound,
    lift,
)
from .catalog import FdrmcRecord, component_dim_plan, oracle_optimal_dim, realize
from .ferrers import FerrersDiagram
from .rank_metric import LinearMatrixCode, code_min_rank, gabidulin
from .skeleton import Skeleton, SkeletonEntry, one_factorization, skeleton_explicit, skeleton_theorem31
from .verification import VerificationReport, verify_plan, verify_skeleton, verify_table5

__all__ = [
    "GF",
    "Subspace",
    "field",
    "rank",
    "rref",
    "subspace_distance",
    "CdcPlan",
    "build_plan",
    "build_plan_explicit",
    "cardinality_theorem32",
    "corollary_bound",
    "lift",
    "FdrmcRecord",
    "component_dim_plan",
    "oracle_optimal_dim",
    "realize",
    "FerrersDiagram",
    "LinearMatrixCode",
    "code_min_rank",
    "gabidulin",
    "Skeleton",
    "SkeletonEntry",
    "one_factorization",
    "skeleton_explicit",
    "skeleton_theorem31",
    "VerificationReport",
    "verify_plan",
    "verify_skeleton",
    "verify_table5",
]
__version__ = "0.1.0"
