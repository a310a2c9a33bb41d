"""Operator calculus on symbols: row exchange, union-intersection, dual,
splitting, partial dual.

All operators are pure functions MultiSegment -> MultiSegment.  They are
combinatorial formulas: validity of inputs/outputs as extended
multi-segments is never assumed here (that is the nonvanishing module's
job); where an operator's formula needs a precondition (an order
property, l staying non-negative) we raise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import (
    MultiSegment,
    NegativeL,
    NotAdmissible,
    Row,
    admissible_orders,
    equivalent,
    neg_one_pow,
    order_P_ok,
    order_Pprime_ok,
)
from .halfint import HalfInt


class OrderNotPprime(ValueError):
    pass


# ---------------------------------------------------------------------------
# shift and add
# ---------------------------------------------------------------------------


def shift(e: MultiSegment, rho_id: str, j: int, d: int) -> MultiSegment:
    rows = list(e.block(rho_id))
    rows[j] = rows[j].shifted(d)
    return e.with_block(rho_id, rows)


def shift_block(e: MultiSegment, rho_id: str, d: int) -> MultiSegment:
    return e.with_block(rho_id, (r.shifted(d) for r in e.block(rho_id)))


def add_op(e: MultiSegment, rho_id: str, j: int, d: int) -> MultiSegment:
    rows = list(e.block(rho_id))
    rows[j] = rows[j].added(d)
    return e.with_block(rho_id, rows)


def add_block(e: MultiSegment, rho_id: str, d: int) -> MultiSegment:
    return e.with_block(rho_id, (r.added(d) for r in e.block(rho_id)))


# ---------------------------------------------------------------------------
# row exchange R_k
# ---------------------------------------------------------------------------


def _swap_admissible(x: Row, y: Row) -> bool:
    """May rows (x, y) appear in order (y, x)?  (P) forbids it only when
    y strictly dominates x."""
    return not (y.A > x.A and y.B > x.B)


def _exchange_pair(x: Row, y: Row) -> tuple[Row, Row]:
    """The (l, eta) transformation of Definition 'row exchange' on the
    adjacent pair (x, y); returns the pair in swapped order (y', x')."""
    eps = neg_one_pow(x.A - x.B) * x.eta * y.eta
    if y.A <= x.A and y.B >= x.B:
        # Case 1: [A_k,B_k] contains [A_{k+1},B_{k+1}] strictly or not;
        # equal supports are routed to Case 2 below.
        if not (y.A == x.A and y.B == x.B):
            ly, ey = y.l, neg_one_pow(x.A - x.B) * y.eta
            gap = y.b - 2 * y.l
            if eps == 1 and x.b - 2 * x.l < 2 * gap:
                lx, ex = x.b - (x.l + gap), neg_one_pow(y.A - y.B) * x.eta
            elif eps == 1:
                lx, ex = x.l + gap, -neg_one_pow(y.A - y.B) * x.eta
            else:
                lx, ex = x.l - gap, -neg_one_pow(y.A - y.B) * x.eta
            return Row(y.A, y.B, ly, ey), Row(x.A, x.B, lx, ex)
    # Case 2: [A_k,B_k] contained in [A_{k+1},B_{k+1}]
    lx, ex = x.l, neg_one_pow(y.A - y.B) * x.eta
    gap = x.b - 2 * x.l
    if eps == 1 and y.b - 2 * y.l < 2 * gap:
        ly, ey = y.b - (y.l + gap), neg_one_pow(x.A - x.B) * y.eta
    elif eps == 1:
        ly, ey = y.l + gap, -neg_one_pow(x.A - x.B) * y.eta
    else:
        ly, ey = y.l - gap, -neg_one_pow(x.A - x.B) * y.eta
    return Row(y.A, y.B, ly, ey), Row(x.A, x.B, lx, ex)


def exchange_rows(rows, k: int):
    """R_k on a row tuple; returns the new tuple (identity if not admissible)."""
    rows = list(rows)
    x, y = rows[k], rows[k + 1]
    if not _swap_admissible(x, y):
        return tuple(rows)
    results = set()
    keep = None
    for rx in x.representatives():
        for ry in y.representatives():
            ny, nx = _exchange_pair(rx, ry)
            res = (ny.canonical(), nx.canonical())
            if res not in results:
                results.add(res)
                keep = res
    if len(results) > 1:
        # representatives must agree up to equivalence on the equivalence
        # class; keep the lexicographically least outcome for determinism
        keep = min(results, key=lambda pr: (pr[0].key(), pr[1].key()))
    rows[k], rows[k + 1] = keep
    return tuple(rows)


def row_exchange(e: MultiSegment, rho_id: str, k: int) -> MultiSegment:
    return e.with_block(rho_id, exchange_rows(e.block(rho_id), k))


# ---------------------------------------------------------------------------
# reordering by chains of R_k
# ---------------------------------------------------------------------------


def reorder_rows(rows, perm):
    """Apply R_k chains to bring ``rows`` into the order rows[perm[0]],
    rows[perm[1]], ...; the target order must satisfy (P)."""
    rows = tuple(rows)
    if not order_P_ok([rows[i] for i in perm]):
        raise NotAdmissible(f"target order {perm} violates (P)")
    rank = {orig: pos for pos, orig in enumerate(perm)}
    tags = list(range(len(rows)))
    cur = list(rows)
    changed = True
    while changed:
        changed = False
        for k in range(len(cur) - 1):
            if rank[tags[k]] > rank[tags[k + 1]]:
                if not _swap_admissible(cur[k], cur[k + 1]):
                    raise NotAdmissible("blocked swap while reordering")
                swapped = exchange_rows(cur, k)
                cur = list(swapped)
                tags[k], tags[k + 1] = tags[k + 1], tags[k]
                changed = True
    return tuple(cur)


def reorder(e: MultiSegment, rho_id: str, perm) -> MultiSegment:
    return e.with_block(rho_id, reorder_rows(e.block(rho_id), perm))


def normal_perm(rows) -> tuple[int, ...]:
    """The normal order: B ascending, then A ascending (stable)."""
    return tuple(
        sorted(range(len(rows)), key=lambda i: (rows[i].B.doubled, rows[i].A.doubled, i))
    )


def to_normal_order(e: MultiSegment) -> MultiSegment:
    for rid in e.rho_ids():
        e = reorder(e, rid, normal_perm(e.block(rid)))
    return e


def ensure_pprime(e: MultiSegment) -> MultiSegment:
    """Reorder blocks to the normal order wherever (P') fails."""
    for rid in e.rho_ids():
        if not order_Pprime_ok(e.block(rid)):
            e = reorder(e, rid, normal_perm(e.block(rid)))
    return e


def canonical_key(e: MultiSegment):
    """A key identifying e modulo row exchanges and Def-3.1(3) equivalence.

    Blocks are brought to the normal order; within each run of rows with
    identical support the R_k orbit is explored and the lexicographically
    least (l, eta) labelling is chosen.
    """
    e = to_normal_order(e)
    parts = []
    for rid in e.rho_ids():
        rows = e.block(rid)
        runs = []
        i = 0
        while i < len(rows):
            j = i
            while j + 1 < len(rows) and rows[j + 1].support == rows[i].support:
                j += 1
            runs.append((i, j))
            i = j + 1
        best = list(rows)
        for lo, hi_ in runs:
            if hi_ == lo:
                continue
            seen = set()
            frontier = [tuple(r.canonical() for r in best[lo : hi_ + 1])]
            seen.update(frontier)
            least = frontier[0]
            while frontier:
                nxt = []
                for state in frontier:
                    for k in range(len(state) - 1):
                        new = exchange_rows(state, k)
                        new = tuple(r.canonical() for r in new)
                        if new not in seen:
                            seen.add(new)
                            nxt.append(new)
                            if tuple(r.key() for r in new) < tuple(r.key() for r in least):
                                least = new
                frontier = nxt
            best[lo : hi_ + 1] = list(least)
        parts.append((rid, tuple(r.canonical().key() for r in best)))
    return (e.group.kind, e.group.N, tuple(parts))


# ---------------------------------------------------------------------------
# union-intersection
# ---------------------------------------------------------------------------

UI_NOT_APPLICABLE = "none"


@dataclass(frozen=True)
class UiResult:
    segment: MultiSegment
    ui_type: str  # "1", "2", "3", "3p" or "none"
    deleted: bool

    @property
    def applicable(self) -> bool:
        return self.ui_type != UI_NOT_APPLICABLE


def _ui_adjacent_values(x: Row, y: Row):
    """Definition 'union-intersection' on an adjacent pair x < y with
    A_x < A_y, B_x < B_y.  Yields (type, new_x, new_y_or_None) over the
    eta representatives of the equivalence classes."""
    out = []
    dA = (y.A - x.A).as_int()
    for rx in x.representatives():
        for ry in y.representatives():
            eps = neg_one_pow(rx.A - rx.B) * rx.eta * ry.eta
            sup_x = (y.A, x.B)
            sup_y = (x.A, y.B)
            if eps == 1 and y.A - y.l == x.A - x.l:
                nx = Row(*sup_x, rx.l, rx.eta)
                ny = Row(*sup_y, ry.l - dA, neg_one_pow(dA) * ry.eta)
                out.append(("1", nx, ny))
            elif eps == 1 and y.B + y.l == x.B + x.l:
                if rx.b - 2 * rx.l >= dA:
                    nx = Row(*sup_x, rx.l + dA, rx.eta)
                else:
                    nx = Row(*sup_x, rx.b - rx.l, -rx.eta)
                ny = Row(*sup_y, ry.l, neg_one_pow(dA) * ry.eta)
                out.append(("2", nx, ny))
            elif eps == -1 and y.B + y.l == x.A - x.l + 1:
                if x.l == 0 and y.l == 0:
                    nx = Row(*sup_x, 0, rx.eta)
                    out.append(("3p", nx, None))
                else:
                    nx = Row(*sup_x, rx.l, rx.eta)
                    if ry.l <= rx.l:
                        ny = Row(*sup_y, ry.l, neg_one_pow(dA) * ry.eta)
                    else:
                        ny = Row(*sup_y, rx.l, -neg_one_pow(dA) * ry.eta)
                    out.append(("3", nx, ny))
    return out


def _adjacency_order(rows, i: int, j: int) -> Optional[tuple[int, ...]]:
    """An admissible order placing j immediately after i, or None.

    Exists iff no row is (P)-forced strictly between them.
    """
    n = len(rows)
    for a in range(n):
        if a in (i, j):
            continue
        r = rows[a]
        if rows[i].A < r.A < rows[j].A and rows[i].B < r.B < rows[j].B:
            return None
    below = [
        a
        for a in range(n)
        if a not in (i, j) and not (rows[a].A > rows[i].A and rows[a].B > rows[i].B)
    ]
    above = [a for a in range(n) if a not in (i, j) and a not in below]
    keyf = lambda a: (rows[a].B.doubled, rows[a].A.doubled, a)
    perm = tuple(sorted(below, key=keyf)) + (i, j) + tuple(sorted(above, key=keyf))
    if not order_P_ok([rows[a] for a in perm]):
        return None
    return perm


def ui(e: MultiSegment, rho_id: str, i: int, j: int) -> UiResult:
    """Generalized union-intersection ui_{i,j} on rows i, j of the block.

    Returns the transformed multi-segment with rows restored to the input
    order when that order is still admissible (normal order otherwise);
    type "3p" signals that row j was deleted.
    """
    rows = e.block(rho_id)
    if i == j or not (rows[i].A < rows[j].A and rows[i].B < rows[j].B):
        return UiResult(e, UI_NOT_APPLICABLE, False)
    perm = _adjacency_order(rows, i, j)
    if perm is None:
        return UiResult(e, UI_NOT_APPLICABLE, False)
    ordered = reorder_rows(rows, perm)
    k = perm.index(i)
    cands = _ui_adjacent_values(ordered[k], ordered[k + 1])
    if not cands:
        return UiResult(e, UI_NOT_APPLICABLE, False)
    results = []
    for typ, nx, ny in cands:
        new_rows = list(ordered)
        if ny is None:
            new_rows[k] = nx
            del new_rows[k + 1]
            tags = [t for t in perm if t != j]
        else:
            new_rows[k], new_rows[k + 1] = nx, ny
            tags = list(perm)
        # restore the original relative order of surviving tags
        order = sorted(range(len(tags)), key=lambda p: tags[p])
        if order_P_ok([new_rows[p] for p in order]):
            restored = reorder_rows(new_rows, order)
        else:
            restored = reorder_rows(new_rows, normal_perm(new_rows))
        results.append((typ, e.with_block(rho_id, restored)))
    first_type, first = results[0]
    for typ, other in results[1:]:
        if not equivalent(first, other):
            raise AssertionError(
                f"ui_{{{i},{j}}} ill-defined on eta representatives: {e}"
            )
    return UiResult(first, first_type, first_type == "3p")


def ui_pairs(e: MultiSegment, rho_id: str):
    """All (i, j) with ui applicable, with results."""
    n = len(e.block(rho_id))
    for i in range(n):
        for j in range(n):
            if i != j:
                res = ui(e, rho_id, i, j)
                if res.applicable:
                    yield (i, j, res)


# ---------------------------------------------------------------------------
# dual
# ---------------------------------------------------------------------------


def dual_block(rows) -> tuple[Row, ...]:
    if not order_Pprime_ok(rows):
        raise OrderNotPprime("dual requires a (P') order")
    n = len(rows)
    a_vals = [r.a for r in rows]
    b_vals = [r.b for r in rows]
    alpha = [sum(a_vals[:i]) for i in range(n)]
    beta = [sum(b_vals[i + 1 :]) for i in range(n)]
    out = []
    for i, r in enumerate(rows):
        eta = r.eta
        if not r.B.is_integer() and r.eta_free():
            eta = -neg_one_pow(alpha[i])  # (-1)^{alpha_i + 1}
        if r.B.is_integer():
            l2 = 2 * r.l + r.B.doubled
            etap = neg_one_pow(alpha[i] + beta[i]) * eta
        else:
            l2 = 2 * r.l + r.B.doubled + neg_one_pow(alpha[i]) * eta
            etap = -neg_one_pow(alpha[i] + beta[i]) * eta
        if l2 % 2 or l2 < 0:
            raise NegativeL(f"dual produced l = {l2}/2 on row {r}")
        out.append(Row(r.A, -r.B, l2 // 2, etap))
    return tuple(reversed(out))


def dual(e: MultiSegment) -> MultiSegment:
    out = e
    for rid in e.rho_ids():
        out = out.with_block(rid, dual_block(e.block(rid)))
    return out


def dual_ui_dual(e: MultiSegment, rho_id: str, i: int, j: int) -> UiResult:
    """dual o ui_{i,j} o dual; indices refer to rows of dual(e)'s block."""
    d = dual(ensure_pprime(e))
    res = ui(d, rho_id, i, j)
    if not res.applicable:
        return UiResult(e, UI_NOT_APPLICABLE, False)
    back = dual(ensure_pprime(res.segment))
    return UiResult(back, res.ui_type, res.deleted)


def ui_inverse(e: MultiSegment, rho_id: str, i: int, j: int) -> UiResult:
    """The inverse of ui_{i,j} away from type 3': dual o ui_{j,i} o dual.

    Indices refer to rows of dual(e)'s block (the dual reverses order).
    """
    return dual_ui_dual(e, rho_id, i, j)


# ---------------------------------------------------------------------------
# splitting (the inverse of ui of type 3')
# ---------------------------------------------------------------------------


def split_candidates(e: MultiSegment, rho_id: str):
    """All results of Corollary 'split' applied to the block: for every
    admissible order giving some row l = 0 and every legal cut 0 <= r <=
    A-B-1.  Yields (j_original_index, r, result)."""
    rows = e.block(rho_id)
    positive = all(r.B > 0 for r in rows)
    seen = set()
    for perm in admissible_orders(rows):
        try:
            ordered = reorder_rows(rows, perm)
        except NotAdmissible:
            continue
        for pos, orig in enumerate(perm):
            row_j = ordered[pos]
            if row_j.l != 0:
                continue
            for r in range(row_j.b - 1):
                if not positive and (2 * row_j.B + HalfInt.of(r)).doubled < 0:
                    continue
                lower = Row(row_j.B + r, row_j.B, 0, row_j.eta)
                upper = Row(row_j.A, row_j.B + r + 1, 0, neg_one_pow(r + 1) * row_j.eta)
                new_rows = list(ordered)
                new_rows[pos : pos + 1] = [lower, upper]
                if not order_P_ok(new_rows):
                    continue
                result = e.with_block(rho_id, reorder_rows(new_rows, normal_perm(new_rows)))
                key = canonical_key(result)
                if key in seen:
                    continue
                seen.add(key)
                yield (orig, r, result)


def split(e: MultiSegment, rho_id: str, j: int, r: int):
    """Split row j at cut r if legal; returns the result or None."""
    for orig, rr, result in split_candidates(e, rho_id):
        if orig == j and rr == r:
            return result
    return None


# ---------------------------------------------------------------------------
# partial dual
# ---------------------------------------------------------------------------


def _partial_dual_plus_block(rows, k: int):
    """dual_k^+ on a (P')-ordered block, or None if not applicable."""
    if not order_Pprime_ok(rows):
        raise OrderNotPprime("partial dual requires a (P') order")
    r = rows[k]
    if r.B != HalfInt(1) or r.l != 0:
        return None
    alpha_k = sum(rows[i].a for i in range(k))
    if neg_one_pow(alpha_k) * r.eta != -1:
        return None
    if any(rows[i].B >= HalfInt(1) for i in range(k)):
        return None
    f2 = rows[k + 1 :]
    d = dual_block(rows)
    n = len(rows)
    kd = n - 1 - k  # the pivot's position in the reversed dual
    pivot = d[kd]
    assert pivot.B == HalfInt(-1) and pivot.l == 0
    flipped = list(d)
    flipped[kd] = Row(pivot.A, HalfInt(1), 0, -pivot.eta)
    dd = dual_block(tuple(flipped))
    f1_new = dd[:k]
    mid = dd[k]
    assert mid.support == (r.A, HalfInt(-1)) and mid.l == 0 and mid.eta == -r.eta
    return f1_new + (mid,) + f2


def partial_dual(e: MultiSegment, rho_id: str, k: int, sign: str):
    """dual_k^{+/-} on row k of the (stored, (P')-ordered) block.

    Returns the new multi-segment or None when not applicable.
    """
    rows = e.block(rho_id)
    if sign == "+":
        new = _partial_dual_plus_block(rows, k)
        return None if new is None else e.with_block(rho_id, new)
    # dual_k^- = dual o dual_k^+ o dual; the pivot sits at the mirrored
    # position of the reversed dual block
    d = dual(ensure_pprime(e))
    drows = d.block(rho_id)
    kk = len(drows) - 1 - k
    res = _partial_dual_plus_block(drows, kk)
    if res is None:
        return None
    return dual(ensure_pprime(d.with_block(rho_id, res)))


def partial_dual_candidates(e: MultiSegment):
    """All applicable (rho_id, k, sign, result) partial duals of e."""
    e = ensure_pprime(e)
    out = []
    for rid in e.rho_ids():
        rows = e.block(rid)
        for k in range(len(rows)):
            if rows[k].B == HalfInt(1):
                res = partial_dual(e, rid, k, "+")
                if res is not None:
                    out.append((rid, k, "+", res))
            if rows[k].B == HalfInt(-1):
                res = partial_dual(e, rid, k, "-")
                if res is not None:
                    out.append((rid, k, "-", res))
    return out
