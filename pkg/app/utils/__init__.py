from .textformat import (
    format_matrix,
    format_subspace,
    parse_matrix,
    parse_subspace,
    read_matrix,
    read_subspace,
    write_matrix,
    write_subspace,
    write_text,
)
