"""Combinatorial non-vanishing test for pi(E).

The criterion: the unshifted blocks must satisfy the per-row lower bound
(star condition), and after a uniform shift into the non-negative cone
every adjacent pair in every admissible order must pass the extreme-case
inequalities.
"""

from __future__ import annotations

import functools

from .core import MultiSegment, Row, admissible_orders, neg_one_pow, order_Pprime_ok
from .halfint import HalfInt
from .operators import normal_perm, reorder_rows


def adjacent_pair_ok(x: Row, y: Row) -> bool:
    """The inequalities for an adjacent pair (x below y); all applicable
    cases must pass.  Class-invariant in the free-eta rows."""
    eps = neg_one_pow(x.A - x.B) * x.eta * y.eta
    ok = True
    if x.A <= y.A and x.B <= y.B:
        if eps == 1:
            ok = ok and x.B + x.l <= y.B + y.l and x.A - x.l <= y.A - y.l
        else:
            ok = ok and x.A - x.l < y.B + y.l
    if y.B <= x.B and x.A <= y.A:  # [x] inside [y]
        if eps == 1:
            ok = ok and 0 <= y.l - x.l <= y.b - x.b
        else:
            ok = ok and x.l + y.l >= x.b
    if x.B <= y.B and y.A <= x.A:  # [x] contains [y]
        if eps == 1:
            ok = ok and 0 <= x.l - y.l <= x.b - y.b
        else:
            ok = ok and x.l + y.l >= y.b
    return ok


def star_condition(rows) -> bool:
    """Per-row bound of the non-vanishing theorem, using the stored order."""
    alpha = 0
    for r in rows:
        bl = r.B + r.l
        if r.B.is_integer():
            if bl.doubled < 0:
                return False
        else:
            if r.eta_free():
                eta = neg_one_pow(alpha)  # equivalent reading on valid rows
            else:
                eta = r.eta
            need = HalfInt(1) if eta == -neg_one_pow(alpha) else HalfInt(-1)
            if bl < need:
                return False
        alpha += r.a
    return True


@functools.lru_cache(maxsize=200000)
def _nonneg_block_ok(rows: tuple) -> bool:
    """All adjacent pairs in all admissible orders pass, for a block with
    non-negative B."""
    for perm in admissible_orders(rows):
        ordered = reorder_rows(rows, perm)
        for k in range(len(ordered) - 1):
            if not adjacent_pair_ok(ordered[k], ordered[k + 1]):
                return False
    return True


@functools.lru_cache(maxsize=200000)
def _block_nonzero(rows: tuple) -> bool:
    if not rows:
        return True
    if any(r.B.doubled < 0 for r in rows) and not order_Pprime_ok(rows):
        rows = reorder_rows(rows, normal_perm(rows))
    if not star_condition(rows):
        return False
    dmin = min(r.B for r in rows)
    d = max(0, (-dmin).ceil())
    shifted = tuple(r.shifted(d).canonical() for r in rows)
    return _nonneg_block_ok(shifted)


def is_nonzero(e: MultiSegment) -> bool:
    """True iff pi(E) is a nonzero representation."""
    return all(_block_nonzero(tuple(r.canonical() for r in e.block(rid))) for rid in e.rho_ids())
