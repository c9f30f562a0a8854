from .predicates import (
    LineCheck,
    LineTester,
    WitnessCertificate,
    ker_coker_noninjective,
    line_full_rank,
    maps_ker_into_im,
)
from .search import (
    SearchOutcome,
    SearchStatus,
    SearchStrategy,
    constant_det_witness_search,
    witness_search,
)
