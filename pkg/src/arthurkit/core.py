"""Domain types for the extended multi-segment calculus.

The central object is a multi-segment: per supercuspidal label rho, an
ordered list of rows ([A,B]_rho, l, eta) together with the group the
parameter lives on.  Rows with 0 <= l <= b/2 everywhere form an extended
multi-segment; dropping the upper bound gives a symbol.  Everything is
immutable and exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .halfint import HalfInt, hi


def neg_one_pow(k) -> int:
    """(-1)**k for an integer or integer-valued HalfInt."""
    if isinstance(k, HalfInt):
        k = k.as_int()
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# rho labels and groups
# ---------------------------------------------------------------------------

ORTH = "orthogonal"
SYMP = "symplectic"


@dataclass(frozen=True, order=True)
class RhoLabel:
    """Opaque self-dual supercuspidal of GL_dim; only (id, dim, parity) matter."""

    id: str
    dim: int
    parity: str  # ORTH or SYMP

    def __post_init__(self):
        if self.parity not in (ORTH, SYMP):
            raise ValueError(f"bad parity {self.parity!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")


@dataclass(frozen=True)
class GroupSpec:
    """kind 'Sp' (target Sp_{N-1}, N=2n+1) or 'SOodd' (SO_{N+1}, N=2n)."""

    kind: str
    N: int

    def __post_init__(self):
        if self.kind not in ("Sp", "SOodd"):
            raise ValueError(f"bad group kind {self.kind!r}")
        if self.kind == "Sp" and self.N % 2 == 0:
            raise ValueError("Sp requires odd N = 2n+1")
        if self.kind == "SOodd" and self.N % 2 == 1:
            raise ValueError("SOodd requires even N = 2n")

    def __str__(self):
        if self.kind == "Sp":
            return f"Sp({self.N - 1})"
        return f"SO({self.N + 1})"


def summand_type_ok(kind: str, parity: str, a: int, b: int) -> bool:
    """Is rho (x) S_a (x) S_b self-dual of the group's dual type?"""
    even = (a + b) % 2 == 0
    if kind == "Sp":
        return even if parity == ORTH else not even
    return (not even) if parity == ORTH else even


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Row:
    """One extended segment ([A,B]_rho, l, eta); eta in {+1,-1}."""

    A: HalfInt
    B: HalfInt
    l: int
    eta: int

    def __post_init__(self):
        if self.eta not in (1, -1):
            raise ValueError("eta must be +1 or -1")
        if (self.A - self.B).doubled % 2 != 0:
            raise ValueError("A - B must be an integer")

    # b = #[A,B] = A-B+1, a = A+B+1 (a may be non-integral on symbols only
    # through invalid input; both are integers on real rows).
    @property
    def b(self) -> int:
        return (self.A - self.B).as_int() + 1

    @property
    def a(self) -> int:
        return (self.A + self.B).as_int() + 1

    @property
    def support(self):
        return (self.A, self.B)

    def eta_free(self) -> bool:
        """η is irrelevant iff l = b/2 (Def of equivalence)."""
        return 2 * self.l == self.b

    def canonical(self) -> "Row":
        if self.eta_free() and self.eta != 1:
            return Row(self.A, self.B, self.l, 1)
        return self

    def representatives(self) -> tuple["Row", ...]:
        """Both η-readings when η is free, else just the row itself."""
        if self.eta_free():
            return (Row(self.A, self.B, self.l, 1), Row(self.A, self.B, self.l, -1))
        return (self,)

    def shifted(self, d: int) -> "Row":
        return Row(self.A + d, self.B + d, self.l, self.eta)

    def added(self, d: int) -> "Row":
        if self.l + d < 0:
            raise NegativeL(f"add would give l = {self.l + d}")
        return Row(self.A + d, self.B - d, self.l + d, self.eta)

    def key(self):
        return (self.B.doubled, self.A.doubled, self.l, self.eta)

    def __str__(self):
        sign = "+" if self.eta == 1 else "-"
        return f"([{self.A},{self.B}],{self.l},{sign})"


def row(A, B, l, eta) -> Row:
    return Row(hi(A), hi(B), l, eta)


class NegativeL(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class ZeroRepresentation(ValueError):
    pass


class NotGoodParity(ValueError):
    pass


class NotTempered(ValueError):
    pass


# ---------------------------------------------------------------------------
# multi-segments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiSegment:
    """A symbol / extended multi-segment: ordered rows per rho label.

    ``blocks`` maps rho id -> tuple of rows in the fixed admissible order
    (index 1 < 2 < ... reading left to right).  Iteration over rho ids is
    always sorted, so serialization is deterministic.
    """

    group: GroupSpec
    rhos: tuple[RhoLabel, ...]
    blocks: dict

    def __post_init__(self):
        object.__setattr__(self, "rhos", tuple(sorted(self.rhos)))
        blocks = {k: tuple(v) for k, v in sorted(self.blocks.items())}
        object.__setattr__(self, "blocks", blocks)
        ids = {r.id for r in self.rhos}
        if set(blocks) - ids:
            raise ValueError("block without rho label")

    def rho(self, rho_id: str) -> RhoLabel:
        for r in self.rhos:
            if r.id == rho_id:
                return r
        raise KeyError(rho_id)

    def rho_ids(self):
        return sorted(self.blocks)

    def block(self, rho_id: str) -> tuple:
        return self.blocks.get(rho_id, ())

    def with_block(self, rho_id: str, rows: Iterable[Row]) -> "MultiSegment":
        blocks = dict(self.blocks)
        rows = tuple(rows)
        if rows:
            blocks[rho_id] = rows
        else:
            blocks.pop(rho_id, None)
        return MultiSegment(self.group, self.rhos, blocks)

    def canonical_rows(self) -> "MultiSegment":
        return MultiSegment(
            self.group,
            self.rhos,
            {k: tuple(r.canonical() for r in v) for k, v in self.blocks.items()},
        )

    def total_rows(self) -> int:
        return sum(len(v) for v in self.blocks.values())

    def strict_key(self):
        """Raw field equality key (stored order, canonical eta)."""
        e = self.canonical_rows()
        return (
            e.group.kind,
            e.group.N,
            tuple((k, tuple(r.key() for r in v)) for k, v in sorted(e.blocks.items())),
        )

    def __str__(self):
        parts = [str(self.group)]
        for rid in self.rho_ids():
            rows = " ".join(str(r) for r in self.block(rid))
            parts.append(f"{rid}: {rows}")
        return "; ".join(parts)


def equivalent(e1: MultiSegment, e2: MultiSegment) -> bool:
    """Def-3.1(3) equivalence: rowwise equality with η ignored when l = b/2."""
    return e1.canonical_rows().strict_key() == e2.canonical_rows().strict_key()


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def order_P_ok(rows) -> bool:
    """Stored order satisfies (P): A_i > A_j and B_i > B_j forces i later."""
    for p in range(len(rows)):
        for q in range(p + 1, len(rows)):
            if rows[p].A > rows[q].A and rows[p].B > rows[q].B:
                return False
    return True


def order_Pprime_ok(rows) -> bool:
    """(P'): B strictly increasing forces the same order (B non-decreasing)."""
    return all(rows[p].B <= rows[q].B for p in range(len(rows)) for q in range(p + 1, len(rows)))


def order_Pdoubleprime_ok(rows) -> bool:
    """(P''): sorted by (A, B) lexicographically non-decreasing."""
    for p in range(len(rows) - 1):
        x, y = rows[p], rows[p + 1]
        if x.A > y.A or (x.A == y.A and x.B > y.B):
            return False
    return True


def sign_condition_value(e: MultiSegment) -> int:
    prod = 1
    for rid in e.rho_ids():
        for r in e.block(rid):
            prod *= neg_one_pow(r.b // 2 + r.l)
            if r.b % 2:
                prod *= r.eta
    return prod


def validate(e: MultiSegment, symbol: bool = False) -> Optional[str]:
    """Return None if valid, else a string describing the first violation.

    Checks, in order: order (P), A+B >= 0, l-range, good parity,
    sign condition, dimension sum.  ``symbol=True`` drops l <= b/2.
    """
    for rid in e.rho_ids():
        rows = e.block(rid)
        if not order_P_ok(rows):
            return f"order of block {rid} violates (P)"
    for rid in e.rho_ids():
        for r in e.block(rid):
            if (r.A + r.B).doubled < 0:
                return f"row {r} of {rid} has A+B < 0"
    for rid in e.rho_ids():
        for r in e.block(rid):
            if r.b < 1:
                return f"row {r} of {rid} is empty (b <= 0)"
            if r.l < 0 or (not symbol and 2 * r.l > r.b):
                return f"row {r} of {rid} has l out of range"
    for rid in e.rho_ids():
        rho = e.rho(rid)
        for r in e.block(rid):
            if not summand_type_ok(e.group.kind, rho.parity, r.a, r.b):
                return f"summand of row {r} of {rid} has wrong parity for {e.group}"
    if sign_condition_value(e) != 1:
        return "sign condition fails"
    total = sum(e.rho(rid).dim * r.a * r.b for rid in e.rho_ids() for r in e.block(rid))
    if total != e.group.N:
        return f"dimension sum {total} != N = {e.group.N}"
    return None


def is_valid(e: MultiSegment, symbol: bool = False) -> bool:
    return validate(e, symbol=symbol) is None


# ---------------------------------------------------------------------------
# Arthur parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArthurParameter:
    """Multiset of summands rho (x) S_a (x) S_b."""

    group: GroupSpec
    rhos: tuple[RhoLabel, ...]
    summands: tuple  # tuple of (rho_id, a, b), sorted

    def __post_init__(self):
        object.__setattr__(self, "rhos", tuple(sorted(self.rhos)))
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    def rho(self, rho_id: str) -> RhoLabel:
        for r in self.rhos:
            if r.id == rho_id:
                return r
        raise KeyError(rho_id)

    def dimension(self) -> int:
        return sum(self.rho(rid).dim * a * b for rid, a, b in self.summands)

    def is_good_parity(self) -> bool:
        return all(
            summand_type_ok(self.group.kind, self.rho(rid).parity, a, b)
            for rid, a, b in self.summands
        )

    def is_tempered(self) -> bool:
        return all(b == 1 for _, _, b in self.summands)

    def __str__(self):
        terms = [f"{rid}⊗S{a}⊗S{b}" for rid, a, b in self.summands]
        return " + ".join(terms) if terms else "0"


def psi_of(e: MultiSegment) -> ArthurParameter:
    """The parameter attached to E: summand per row, (a,b) = (A+B+1, A-B+1)."""
    summands = [
        (rid, r.a, r.b) for rid in e.rho_ids() for r in e.block(rid)
    ]
    return ArthurParameter(e.group, e.rhos, tuple(summands))


def support_of(psi: ArthurParameter, rho_id: str):
    """Rows [A,B] of the rho block, sorted in the normal (B, A) order."""
    rows = []
    for rid, a, b in psi.summands:
        if rid == rho_id:
            A = HalfInt(a + b - 2)  # A = (a+b)/2 - 1
            B = HalfInt(a - b)  # B = (a-b)/2
            rows.append((A, B))
    rows.sort(key=lambda t: (t[1].doubled, t[0].doubled))
    return rows


def diagonal_restriction(psi: ArthurParameter) -> ArthurParameter:
    """Compose with the diagonal SL2: each S_a⊗S_b becomes ⊕ S_{a+b-1-2k}⊗S_1."""
    out = []
    for rid, a, b in psi.summands:
        top = a + b - 1
        bot = abs(a - b) + 1
        for c in range(bot, top + 1, 2):
            out.append((rid, c, 1))
    return ArthurParameter(psi.group, psi.rhos, tuple(out))


# ---------------------------------------------------------------------------
# admissible orders
# ---------------------------------------------------------------------------


def admissible_orders(rows) -> list[tuple[int, ...]]:
    """All total orders of the block satisfying (P), deduped by row sequence.

    Returned as tuples of indices into ``rows``; the stored order is
    ``tuple(range(n))``'s sorted-by-(P) relabeling of positions.
    """
    n = len(rows)
    forced = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rows[i].A > rows[j].A and rows[i].B > rows[j].B:
                forced[j][i] = True  # j must come before i
    seen = set()
    out = []
    for perm in itertools.permutations(range(n)):
        pos = {v: k for k, v in enumerate(perm)}
        if any(
            forced[i][j] and pos[i] > pos[j] for i in range(n) for j in range(n)
        ):
            continue
        sig = tuple(rows[i].support for i in perm)
        if sig in seen:
            continue
        seen.add(sig)
        out.append(perm)
    return out


def order_is_admissible(rows, perm) -> bool:
    seq = [rows[i] for i in perm]
    return order_P_ok(seq)


# ---------------------------------------------------------------------------
# pictographs
# ---------------------------------------------------------------------------

SYM_ASCII = {"lt": "<", "gt": ">", "plus": "+", "minus": "-"}
SYM_UNICODE = {"lt": "◁", "gt": "▷", "plus": "⊕", "minus": "⊖"}


def render_block(rows, unicode: bool = False) -> str:
    sym = SYM_UNICODE if unicode else SYM_ASCII
    if not rows:
        return "(empty)"
    lo = min(r.B for r in rows)
    hiA = max(r.A for r in rows)
    cols = []
    c = lo
    while c <= hiA:
        cols.append(c)
        c = c + HalfInt(2)
    width = max(len(str(c)) for c in cols) + 2
    header = "".join(str(c).rjust(width) for c in cols)
    lines = ["    " + header]
    for idx, r in enumerate(rows):
        cells = []
        for c in cols:
            if c < r.B or c > r.A:
                cells.append("")
            elif c < r.B + r.l:
                cells.append(sym["lt"])
            elif c > r.A - r.l:
                cells.append(sym["gt"])
            else:
                k = (c - (r.B + r.l)).as_int()
                s = r.eta * neg_one_pow(k)
                cells.append(sym["plus"] if s == 1 else sym["minus"])
        lines.append(f"{idx + 1:>3} " + "".join(cell.rjust(width) for cell in cells))
    return "\n".join(lines)


def render_pictograph(e: MultiSegment, unicode: bool = False) -> str:
    parts = [str(e.group)]
    for rid in e.rho_ids():
        rho = e.rho(rid)
        parts.append(f"[{rid}: {rho.parity}, dim {rho.dim}]")
        parts.append(render_block(e.block(rid), unicode=unicode))
    return "\n".join(parts)


def parse_block(text: str) -> list[Row]:
    """Parse the output of render_block back into rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    cols, starts = [], []
    tok = ""
    for i, ch in enumerate(header + " "):
        if ch.isspace():
            if tok:
                cols.append(HalfInt.parse(tok))
                starts.append(i - len(tok))
                tok = ""
        else:
            tok += ch
    rows = []
    for ln in lines[1:]:
        body = ln[4:] if len(ln) > 4 else ""
        marks = {}
        for c, st in zip(cols, starts):
            seg = body[max(0, st - 4): st - 4 + max(len(str(c)), 1) + 2]
            seg = seg.strip()
            if seg:
                marks[c] = seg
        filled = sorted(marks, key=lambda h: h.doubled)
        if not filled:
            continue
        B, A = filled[0], filled[-1]
        l = sum(1 for c in filled if marks[c] in ("<", "◁"))
        first_circle = B + l
        sgn = marks.get(first_circle)
        eta = 1 if sgn in ("+", "⊕") else -1 if sgn in ("-", "⊖") else 1
        rows.append(Row(A, B, l, eta))
    return rows


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _rhos_to_json(rhos):
    return [{"id": r.id, "dim": r.dim, "parity": r.parity} for r in sorted(rhos)]


def _rhos_from_json(data):
    return tuple(RhoLabel(d["id"], int(d["dim"]), d["parity"]) for d in data)


def _group_to_json(g: GroupSpec):
    return {"kind": g.kind, "N": g.N}


def _group_from_json(d):
    return GroupSpec(d["kind"], int(d["N"]))


def multisegment_to_json(e: MultiSegment) -> dict:
    return {
        "group": _group_to_json(e.group),
        "rho": _rhos_to_json(e.rhos),
        "blocks": {
            rid: [
                {"A": str(r.A), "B": str(r.B), "l": r.l, "eta": r.eta}
                for r in e.block(rid)
            ]
            for rid in e.rho_ids()
        },
    }


def multisegment_from_json(d: dict) -> MultiSegment:
    rhos = _rhos_from_json(d["rho"])
    blocks = {
        rid: tuple(
            Row(hi(r["A"]), hi(r["B"]), int(r["l"]), int(r["eta"])) for r in rows
        )
        for rid, rows in d["blocks"].items()
    }
    return MultiSegment(_group_from_json(d["group"]), rhos, blocks)


def parameter_to_json(psi: ArthurParameter) -> dict:
    return {
        "group": _group_to_json(psi.group),
        "rho": _rhos_to_json(psi.rhos),
        "summands": [{"rho": rid, "a": a, "b": b} for rid, a, b in psi.summands],
    }


def parameter_from_json(d: dict) -> ArthurParameter:
    return ArthurParameter(
        _group_from_json(d["group"]),
        _rhos_from_json(d["rho"]),
        tuple((s["rho"], int(s["a"]), int(s["b"])) for s in d["summands"]),
    )


def dumps(obj) -> str:
    if isinstance(obj, MultiSegment):
        return json.dumps(multisegment_to_json(obj), indent=2, sort_keys=True)
    if isinstance(obj, ArthurParameter):
        return json.dumps(parameter_to_json(obj), indent=2, sort_keys=True)
    raise TypeError(type(obj))
