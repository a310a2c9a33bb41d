"""Langlands data and the derivative/socle engine.

An LData is the triple (segments; tempered parameter with signs) that
classifies an irreducible representation of good parity.  Segments are
stored as (rho, x, y) meaning the Steinberg piece on the exponent range
x, x-1, ..., -y; validity demands x + y >= 0 and negative center x < y.

The engine computes the highest rho|.|^x-derivative and the socle
S_{rho|.|^x} directly on this data.  The moves and their blocking rules:

* left ends: a segment starting at x drops to x-1 unless a segment
  starting at x-1 reaching strictly lower blocks it (maximum matching);
* right ends (x > 0 only): a segment ending at -x retracts to -(x-1)
  unless blocked by a segment ending at -(x-1) that starts strictly
  higher, by a tempered summand at z = x-1 (one each), or -- for the
  balanced segment on x-1,...,-x, whose retraction has center zero -- always;
* tempered (x > 0): all copies of z = x drop to z = x-1 when no copy of
  z = x-1 with the opposite sign is present (for x = 1/2 the phantom S_0
  carries sign +1), otherwise pairs of copies convert into balanced
  segments on x-1, ..., -x;
* at x = 0 only left ends move and pairs of z = 0 summands cancel.

Segments shrinking to nothing and S_0 summands are deleted.  Socles are
produced by generating candidate raises and verifying them against the
derivative, which makes the two sides inverse by construction.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .core import (
    GroupSpec,
    MultiSegment,
    RhoLabel,
    Row,
    ZeroRepresentation,
    neg_one_pow,
    summand_type_ok,
)
from .halfint import HalfInt, hi
from .nonvanishing import is_nonzero
from .operators import ensure_pprime, normal_perm, reorder


HALF = HalfInt(1)
NEG_HALF = HalfInt(-1)


@dataclass(frozen=True)
class LData:
    """L(Delta_rho[x_1,-y_1], ...; pi(sum rho x S_{2z+1}, eps))."""

    group: GroupSpec
    rhos: tuple[RhoLabel, ...]
    segments: tuple  # (rho_id, x: HalfInt, y: HalfInt), sorted
    tempered: tuple  # (rho_id, z: HalfInt, eps: int), sorted, one entry per copy

    def __post_init__(self):
        object.__setattr__(self, "rhos", tuple(sorted(self.rhos)))
        segs = []
        for rid, x, y in self.segments:
            x, y = hi(x), hi(y)
            if (x + y).doubled < 0:
                raise ValueError(f"empty segment Delta[{x},{-y}]")
            if x >= y:
                raise ValueError(f"segment Delta[{x},{-y}] has non-negative center")
            segs.append((rid, x, y))
        segs.sort(key=lambda s: ((s[1] - s[2]).doubled, s[1].doubled, s[0]))
        temps = []
        signs = {}
        for rid, z, eps in self.tempered:
            z = hi(z)
            if z.doubled < 0:
                raise ValueError("tempered z must be >= 0")
            if signs.setdefault((rid, z), eps) != eps:
                raise ValueError(f"inconsistent signs on {rid} x S_{2*z.floor()+1}")
            temps.append((rid, z, eps))
        temps.sort(key=lambda t: (t[0], t[1].doubled, t[2]))
        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "tempered", tuple(temps))

    # -- views ---------------------------------------------------------

    def rho(self, rho_id: str) -> RhoLabel:
        for r in self.rhos:
            if r.id == rho_id:
                return r
        raise KeyError(rho_id)

    def segs_of(self, rho_id: str):
        return [(x, y) for rid, x, y in self.segments if rid == rho_id]

    def temps_of(self, rho_id: str):
        return [(z, eps) for rid, z, eps in self.tempered if rid == rho_id]

    def temp_mult(self, rho_id: str, z: HalfInt) -> int:
        return sum(1 for rid, zz, _ in self.tempered if rid == rho_id and zz == z)

    def temp_sign(self, rho_id: str, z: HalfInt):
        for rid, zz, eps in self.tempered:
            if rid == rho_id and zz == z:
                return eps
        return None

    def is_tempered_rep(self) -> bool:
        return not self.segments

    def dimension(self) -> int:
        tot = 0
        for rid, x, y in self.segments:
            tot += 2 * self.rho(rid).dim * ((x + y).as_int() + 1)
        for rid, z, _ in self.tempered:
            tot += self.rho(rid).dim * (2 * z.floor() + (2 if z.is_half_odd() else 1))
        return tot

    def key(self):
        return (
            self.group.kind,
            self.group.N,
            tuple((rid, x.doubled, y.doubled) for rid, x, y in self.segments),
            tuple((rid, z.doubled, eps) for rid, z, eps in self.tempered),
        )

    def __str__(self):
        multi = len({r.id for r in self.rhos if self.segs_of(r.id) or self.temps_of(r.id)}) > 1
        segs = ", ".join(
            f"D{rid if multi else ''}[{x},{-y}]" for rid, x, y in self.segments
        )
        tmps = ",".join(
            f"{z}{'+' if eps == 1 else '-'}" + (f"@{rid}" if multi else "")
            for rid, z, eps in self.tempered
        )
        return f"L({segs}; pi({tmps}))"


def ldata_key(L: LData):
    return L.key()


# ---------------------------------------------------------------------------
# exponent multisets
# ---------------------------------------------------------------------------


def omega_E(e: MultiSegment, rho_id: str) -> Counter:
    """Omega(E_rho): multiset of exponents, one run B..A per row."""
    out = Counter()
    for r in e.block(rho_id):
        c = r.B
        while c <= r.A:
            out[c] += 1
            c = c + 2 * HALF
    return out


def omega_bar_E(e: MultiSegment, rho_id: str) -> Counter:
    out = Counter()
    for r in e.block(rho_id):
        c = -r.A
        while c <= r.B:
            out[c] += 1
            c = c + 2 * HALF
    return out


def omega_pi(L: LData, rho_id: str) -> Counter:
    out = Counter()
    for rid, x, y in L.segments:
        if rid == rho_id:
            out[x] += 1
            out[y] += 1
    for rid, z, _ in L.tempered:
        if rid == rho_id:
            out[z] += 1
    return out


def omega_difference_symmetric(e: MultiSegment, L: LData, rho_id: str) -> bool:
    """Omega(E)\\Omega(pi) is symmetric about -1/2: mult(x) = mult(-x-1)."""
    diff = omega_E(e, rho_id) - omega_pi(L, rho_id)
    return all(diff[x] == diff[-x - 1] for x in list(diff))


# ---------------------------------------------------------------------------
# maximum matchings along an end of segments
# ---------------------------------------------------------------------------


def _match_left_ends(cands, blockers):
    """cands/blockers are lists of (index, e) with e the doubled right end;
    a blocker with e' < e blocks one candidate.  Returns unmatched candidate
    indices, consuming blockers against the longest candidates first."""
    cands = sorted(cands, key=lambda t: t[1])
    pool = sorted(b for _, b in blockers)
    unmatched = []
    import bisect

    for idx, e in cands:
        p = bisect.bisect_left(pool, e)
        if p > 0:
            pool.pop(p - 1)  # largest available e' < e
        else:
            unmatched.append(idx)
    return unmatched


# ---------------------------------------------------------------------------
# highest derivative
# ---------------------------------------------------------------------------


def highest_derivative(L: LData, rho_id: str, x) -> tuple[int, LData]:
    """The highest rho|.|^x-derivative: its order k (k = 0 allowed) and the
    L-data of the irreducible result."""
    x = hi(x)
    segs = list(L.segs_of(rho_id))
    lowered = set()  # indices with left end dropping
    shortened = set()  # indices with right end retracting
    deleted = set()
    k = 0

    # left ends
    cands = [(i, (-y).doubled) for i, (xx, y) in enumerate(segs) if xx == x]
    blockers = [(i, (-y).doubled) for i, (xx, y) in enumerate(segs) if xx == x - 1]
    for i in _match_left_ends(cands, blockers):
        lowered.add(i)
        k += 1

    new_temps = list(L.temps_of(rho_id))
    new_segs_extra = []

    if x.doubled > 0:
        # right ends: candidates end at -x and either start below x-1 or are
        # the singleton at -x; the balanced segment x-1..-x cannot retract
        bc = [
            (i, xx.doubled)
            for i, (xx, y) in enumerate(segs)
            if y == x and (xx < x - 1 or xx == -x)
        ]
        bb = [(i, xx.doubled) for i, (xx, y) in enumerate(segs) if y == x - 1]
        survivors = set(_match_right_ends(bc, bb))
        m_prime = 0 if x == HALF else L.temp_mult(rho_id, x - 1)
        for i in sorted(survivors, key=lambda i: -segs[i][0].doubled)[:m_prime]:
            survivors.discard(i)
        for i in survivors:
            if segs[i][0] == -x:
                deleted.add(i)
            else:
                shortened.add(i)
            k += 1

        # tempered moves
        m = L.temp_mult(rho_id, x)
        if m:
            eps_x = L.temp_sign(rho_id, x)
            occ = 1 if x == HALF else L.temp_sign(rho_id, x - 1)
            if occ is None or occ == eps_x:
                # all copies drop (deleted entirely at x = 1/2)
                new_temps = [t for t in new_temps if t[0] != x]
                if x != HALF:
                    new_temps += [(x - 1, eps_x)] * m
                k += m
            elif m >= 2:
                pairs = m // 2
                keep = m - 2 * pairs
                new_temps = [t for t in new_temps if t[0] != x] + [(x, eps_x)] * keep
                new_segs_extra += [(x - 1, x)] * pairs
                k += pairs
    elif x.doubled == 0:
        m = L.temp_mult(rho_id, x)
        pairs = m // 2
        if pairs:
            new_temps = [t for t in new_temps if t[0] != x] + [(x, L.temp_sign(rho_id, x))] * (m - 2 * pairs)
            k += pairs

    out_segs = []
    for i, (xx, y) in enumerate(segs):
        if i in deleted:
            continue
        if i in lowered:
            if (xx - 1 + y).doubled < 0:
                continue  # became trivial
            out_segs.append((xx - 1, y))
        elif i in shortened:
            out_segs.append((xx, y - 1))
        else:
            out_segs.append((xx, y))
    out_segs += new_segs_extra

    segments = [s for s in L.segments if s[0] != rho_id] + [
        (rho_id, xx, y) for xx, y in out_segs
    ]
    tempered = [t for t in L.tempered if t[0] != rho_id] + [
        (rho_id, z, eps) for z, eps in new_temps
    ]
    return k, LData(L.group, L.rhos, tuple(segments), tuple(tempered))


def _match_right_ends(cands, blockers):
    """cands/blockers are (index, doubled left end); a blocker starting
    strictly above a candidate blocks it."""
    cands = sorted(cands, key=lambda t: -t[1])
    pool = sorted(b for _, b in blockers)
    unmatched = []
    import bisect

    for idx, xx in cands:
        p = bisect.bisect_right(pool, xx)
        if p < len(pool):
            pool.pop(p)  # smallest available x'' > x'
        else:
            unmatched.append(idx)
    return unmatched


def derivative_order(L: LData, rho_id: str, x) -> int:
    return highest_derivative(L, rho_id, x)[0]


# ---------------------------------------------------------------------------
# socle
# ---------------------------------------------------------------------------


def _socle_candidates(L: LData, rho_id: str, x: HalfInt):
    """Liberally generate possible results of soc(rho|.|^x x pi)."""
    segs = L.segs_of(rho_id)
    temps = L.temps_of(rho_id)

    def build(new_segs, new_temps):
        try:
            return LData(
                L.group,
                L.rhos,
                tuple(s for s in L.segments if s[0] != rho_id)
                + tuple((rho_id, xx, y) for xx, y in new_segs),
                tuple(t for t in L.tempered if t[0] != rho_id)
                + tuple((rho_id, z, e) for z, e in new_temps),
            )
        except ValueError:
            return None

    out = []
    # raise a left end x-1 -> x
    for i, (xx, y) in enumerate(segs):
        if xx == x - 1 and y > x:
            out.append(build(segs[:i] + [(x, y)] + segs[i + 1 :], temps))
    # raise a right end -(x-1) -> -x
    for i, (xx, y) in enumerate(segs):
        if y == x - 1 and xx < x:
            out.append(build(segs[:i] + [(xx, x)] + segs[i + 1 :], temps))
    # create a one-point segment at -|x|
    if x.doubled > 0:
        out.append(build(segs + [(-x, x)], temps))
    else:
        out.append(build(segs + [(x, -x)], temps))
    # raise a tempered copy z = x-1 -> x
    if x.doubled > 0:
        for i, (z, eps) in enumerate(temps):
            if z == x - 1:
                out.append(build(segs, temps[:i] + [(x, eps)] + temps[i + 1 :]))
                break
        if x == HALF:
            out.append(build(segs, temps + [(HALF, 1)]))
        # split a balanced segment x-1..-x into a pair of z = x copies
        for i, (xx, y) in enumerate(segs):
            if (xx, y) == (x - 1, x):
                for eps in (1, -1):
                    out.append(
                        build(segs[:i] + segs[i + 1 :], temps + [(x, eps), (x, eps)])
                    )
                break
    return [c for c in out if c is not None]


def socle_add(L: LData, rho_id: str, x, r: int = 1) -> LData:
    """L-data of soc((rho|.|^x)^r x pi); inverse to the highest derivative."""
    x = hi(x)
    if x.doubled == 0:
        raise ValueError("socle_add requires x != 0")
    cur = L
    for _ in range(r):
        k0 = derivative_order(cur, rho_id, x)
        winners = []
        for cand in _socle_candidates(cur, rho_id, x):
            k, back = highest_derivative(cand, rho_id, x)
            if k == k0 + 1 and back.key() == cur.key():
                if all(w.key() != cand.key() for w in winners):
                    winners.append(cand)
        if len(winners) != 1:
            raise AssertionError(
                f"socle at {rho_id}|.|^{x} of {cur}: {len(winners)} candidates"
            )
        cur = winners[0]
    return cur


# ---------------------------------------------------------------------------
# pi(E)
# ---------------------------------------------------------------------------


def separated_shifts(rows) -> list[int]:
    """Minimal non-negative t_i with B_i + t_i >= 0 and strictly separated
    above everything below (rows assumed in a (P') order)."""
    ts = []
    top = None  # max A_j + t_j so far
    for r in rows:
        t = max(0, (-r.B).ceil())
        if top is not None:
            need = (top - r.B).as_int() + 1
            t = max(t, need)
        ts.append(t)
        cur = r.A + t
        top = cur if top is None or cur > top else top
    return ts


def ldata_separated(e: MultiSegment) -> LData:
    """The closed-form L-data for separated non-negative multi-segments."""
    segments, tempered = [], []
    for rid in e.rho_ids():
        rows = e.block(rid)
        for i, r in enumerate(rows):
            if r.B.doubled < 0:
                raise ValueError("not non-negative")
            if i + 1 < len(rows) and rows[i + 1].B <= r.A:
                raise ValueError("not separated")
            for kk in range(r.l):
                segments.append((rid, r.B + kk, r.A - kk))
            z = r.B + r.l
            kk = 0
            while z <= r.A - r.l:
                tempered.append((rid, z, r.eta * neg_one_pow(kk)))
                z = z + 2 * HALF
                kk += 1
    return LData(e.group, e.rhos, tuple(segments), tuple(tempered))


def compute_ldata(e: MultiSegment):
    """The Langlands data of pi(E), or None when pi(E) = 0."""
    if not is_nonzero(e):
        return None
    e = ensure_pprime(e)
    shifted = e
    chains = {}
    for rid in e.rho_ids():
        rows = e.block(rid)
        ts = separated_shifts(rows)
        chains[rid] = [(rows[i], ts[i]) for i in range(len(rows))]
        shifted = shifted.with_block(rid, (rows[i].shifted(ts[i]) for i in range(len(rows))))
    L = ldata_separated(shifted)
    for rid in e.rho_ids():
        for r, t in chains[rid]:
            for lvl in range(t, 0, -1):
                u = r.B + lvl
                while u <= r.A + lvl:
                    k, L = highest_derivative(L, rid, u)
                    if k != 1:
                        raise AssertionError(
                            f"derivative chain broke at {rid}|.|^{u} (k={k}) for {e}"
                        )
                    u = u + 2 * HALF
    return L


def max_A_invariant(L: LData, rho_id: str):
    om = omega_pi(L, rho_id)
    if not om:
        raise ValueError("empty block")
    top = max(om, key=lambda h: h.doubled)
    return top, om[top]


def max_left_shift(e: MultiSegment, rho_id: str) -> int:
    """max{t : pi(E^rho u sh^{-t}(E_rho)) != 0} by the closed form."""
    L = compute_ldata(e)
    if L is None:
        raise ZeroRepresentation("pi(E) = 0")
    if +omega_E(e, rho_id) != +omega_pi(L, rho_id):
        return 0
    # rows keep A+B >= 0: t <= (A_i+B_i)/2
    bound = min((r.A + r.B).doubled // 4 for r in e.block(rho_id))
    for rid, x, y in L.segments:
        if rid == rho_id:
            # (x - (t-1)) + (y - (t-1)) >= 1
            bound = min(bound, ((x + y).as_int() + 1) // 2)
    for rid, z, eps in L.tempered:
        if rid == rho_id:
            if z.is_half_odd():
                b3 = (z + HALF).as_int()
                if eps != 1:
                    b3 -= 1
            else:
                b3 = z.as_int()
            bound = min(bound, b3)
    return max(bound, 0)


# ---------------------------------------------------------------------------
# serialization / pretty form
# ---------------------------------------------------------------------------


def ldata_to_json(L: LData) -> dict:
    from .core import _group_to_json, _rhos_to_json

    return {
        "group": _group_to_json(L.group),
        "rho": _rhos_to_json(L.rhos),
        "segments": [{"rho": rid, "x": str(x), "y": str(y)} for rid, x, y in L.segments],
        "tempered": [
            {"rho": rid, "z": str(z), "eps": eps} for rid, z, eps in L.tempered
        ],
    }


def ldata_from_json(d: dict) -> LData:
    from .core import _group_from_json, _rhos_from_json

    return LData(
        _group_from_json(d["group"]),
        _rhos_from_json(d["rho"]),
        tuple((s["rho"], hi(s["x"]), hi(s["y"])) for s in d["segments"]),
        tuple((t["rho"], hi(t["z"]), int(t["eps"])) for t in d["tempered"]),
    )
