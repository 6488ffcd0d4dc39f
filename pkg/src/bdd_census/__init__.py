"""Counting, ranking, unranking and uniform sampling of ROBDDs by size."""
from .core import (
    FALSE, TRUE, Bdd, Constant, Node, TruthTable, canonical_encode, canonicalize, evaluate,
    is_valid, make_bdd, to_truth_table, validate,
)
from .counting import CountTable, Distribution, count, num_bdds, size_distribution
from .errors import BddCensusError, BudgetExceeded, DomainError, ParseError
from .formats import emit_text, iter_parse, parse_text, to_dot
from .oracle import (
    compact_tree_postorder, compact_truth_table, oracle_distribution, oracle_enumerate,
)
from .spine import (
    Spine, enumerate_completions, extract_spine, level_rank, node_weight, pool_profile,
    spine_weight,
)
from .unranking import Unranker, enumerate_all, rank, sample, sample_many, unrank

__version__ = "0.1.0"
