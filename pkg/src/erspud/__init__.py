"""Exact recovery of sparsely-used square dictionaries by l1 linear programs."""

__version__ = "0.1.0"

from .dictmetrics import MatchReport, hungarian, rel_error, rows_recovered
from .l1lp import (
    RowRecoveryProblem,
    RowRecoverySolution,
    solve_projected_row_recovery,
    solve_row_recovery,
)
from .pipelines import (
    CandidateSet,
    RecoveryResult,
    greedy_select,
    precondition,
    reconstruct_dict,
    recover,
    siv_baseline,
    spud_dc,
    spud_proj,
    spud_sc,
)
from .randmodel import CoeffModel, DictModel, derive_seed, gen_coeffs, gen_dict

__all__ = [
    "CandidateSet",
    "CoeffModel",
    "DictModel",
    "MatchReport",
    "RecoveryResult",
    "RowRecoveryProblem",
    "RowRecoverySolution",
    "derive_seed",
    "gen_coeffs",
    "gen_dict",
    "greedy_select",
    "hungarian",
    "precondition",
    "reconstruct_dict",
    "recover",
    "rel_error",
    "rows_recovered",
    "siv_baseline",
    "solve_projected_row_recovery",
    "solve_row_recovery",
    "spud_dc",
    "spud_proj",
    "spud_sc",
]
