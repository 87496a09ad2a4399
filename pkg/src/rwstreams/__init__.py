"""Compression and string algorithms on a simulated read/write-streams machine."""

from .block_universal import CompressedContainer, choose_order, compress, decompress
from .bwt_pipeline import (
    BwtString,
    bwt_forward,
    bwt_inverse,
    bwt_logspace_oracle,
    bwt_rotation_oracle,
    entropy_only_compress,
    entropy_only_decompress,
    rank_permutation,
    suffix_array_streams,
)
from .debruijn_gen import DeBruijnCycle, adversarial_string, count_cycles, enumerate_cycles_small, generate_cycle
from .entropy_stats import entropy_report, h0, hk, hk_star_total
from .errors import BudgetError, DecodeError, FormatError, InvalidInputError, PassLimitError, RWStreamsError
from .periodicity_grammar import (
    Grammar,
    build_periodic_grammar,
    expand_grammar,
    grammar_size_bits,
    min_period_oracle,
    min_period_streams,
)
from .sort_reduction import SortInstance, decode_sorted, encode_instance, sort_via_bwt
from .stream_machine import MachineBudget, StreamMachine, UsageReport, default_budget, two_stream_merge_sort

__version__ = "0.1.0"
