"""Small GF(2) linear algebra helpers using int bitsets.

A row is packed into a Python int with bit ``j`` holding column ``j``. Results are identical to the
generic elimination path in :mod:`app.algebra.linalg`; the tests compare both.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence


def pack_row(row: Sequence[int]) -> int:
    bits = 0
    for j, x in enumerate(row):
        if x:
            bits |= 1 << j
    return bits


def pack_rows(rows: Iterable[Sequence[int]]) -> List[int]:
    return [pack_row(r) for r in rows]


def gf2_rank(rows: Iterable[int]) -> int:
    """Compute rank over GF(2) by reducing each row against the pivots found so far."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            b = pivots.get(lead)
            if b is None:
                pivots[lead] = r
                break
            r ^= b
    return len(pivots)


def gf2_line_ranks(a_rows: Sequence[int], n_rows: Sequence[int]) -> tuple[int, int]:
    """Ranks of A and A + N (the whole line A + GF(2)N)."""
    return gf2_rank(a_rows), gf2_rank(a ^ b for a, b in zip(a_rows, n_rows))


__all__ = ["pack_row", "pack_rows", "gf2_rank", "gf2_line_ranks"]
