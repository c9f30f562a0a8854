# Exact arithmetic: fields, matrices, polynomials, pencils
from .field import FieldDesc, FieldKind, Scalar, GF, QQ, rationals, parse_field_header
from .matrix import Matrix, block_matrix
from .linalg import (
    rank,
    rref,
    det,
    kernel_basis,
    inverse,
    adjugate,
    block_decompose,
    equivalence_apply,
    equivalence_to_canonical,
    canonical_N,
    is_invertible,
    random_matrix,
    random_invertible,
    random_rank_matrix,
)
from .polynomial import Polynomial, poly_gcd, eval_poly, NEG_INF
from .pencil import (
    DetMethod,
    LineClass,
    PencilAnalysis,
    det_pencil,
    maximal_minors,
    minor_gcd,
    classify_line,
    rational_roots,
    charpoly,
    has_constant_nonzero_det,
)
