"""Exact minimal-position arrangements of two normal multicurves.

The two curves are overlaid by choosing, on every triangulation edge, a
merged order of their crossing points; inside each triangle the normal
arcs of each layer become chords joining boundary points, and two chords
cross exactly when their endpoints interleave around the triangle
boundary.  Chords of one layer never cross each other, so the whole
picture is combinatorial: no coordinates are ever used.

Any merged order realizes some transversal position.  Minimal position is
reached by removing empty bigons.  An empty bigon here is very rigid: its
two arcs run through the same triangles crossing the same edge sequence,
and on every crossed edge the two arcs' points are adjacent in the merged
order (anything between them would have to enter the bigon and could not
leave).  Removing it is therefore a sequence of adjacent transpositions in
the merged orders, which keeps both layers normal and drops exactly two
crossings.  Conversely a pair of crossings consecutive along both curves
whose connecting arcs match up this way always bounds an empty bigon, so
scanning such pairs finds every empty bigon; when none remains, the
position is minimal (curves with excess intersection always bound an empty
bigon).

The minimized overlay is also the substrate for everything that needs the
actual picture: complementary regions with their Euler characteristics and
boundary circuits, filling tests, boundary-of-filling curves, and Dehn
twists (realized as words and pulled tight).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InvalidParamsError, TriangulationMismatchError
from .surfaces import (
    NormalCurve,
    Triangulation,
    corner_counts,
    edge_sides,
    is_admissible,
    make_curve,
    require_same_triangulation,
    vertex_link_vectors,
)

# A token is one curve point on one triangulation edge: (layer, k) with
# k in 1..w counted along the edge's intrinsic direction.
Token = tuple[int, int]


@dataclass
class _Chord:
    """One normal arc of one layer inside one triangle."""

    tri_index: int
    layer: int
    ends: tuple[tuple[int, Token], tuple[int, Token]]  # (boundary pos, token)

    def positions(self) -> tuple[int, int]:
        return (self.ends[0][0], self.ends[1][0])


class Overlay:
    """Mutable overlay of one or two multicurves on a shared triangulation.

    order[e] lists the tokens on edge e in merged order along the edge.
    All other structure (chords, crossings, strand itineraries) is derived
    on demand and invalidated by slides.
    """

    def __init__(self, curves: Sequence[NormalCurve]):
        if not 1 <= len(curves) <= 2:
            raise InvalidParamsError("overlay supports one or two layers")
        first = curves[0]
        for c in curves[1:]:
            require_same_triangulation(first, c)
        self.tri: Triangulation = first.tri
        self.layers: list[tuple[int, ...]] = [c.coords for c in curves]
        self.order: list[list[Token]] = []
        for e in range(self.tri.num_edges):
            toks: list[tuple[Fraction, int, int]] = []
            for layer, coords in enumerate(self.layers):
                w = coords[e]
                for k in range(1, w + 1):
                    toks.append((Fraction(k, w + 1), layer, k))
            toks.sort()
            self.order.append([(layer, k) for _, layer, k in toks])
        self._cache: dict | None = None

    # -- derived structure ---------------------------------------------

    def _derived(self) -> dict:
        if self._cache is None:
            self._cache = _build_derived(self)
        return self._cache

    def _invalidate(self) -> None:
        self._cache = None

    def chords(self) -> list[_Chord]:
        return self._derived()["chords"]

    def crossings(self) -> list["_Crossing"]:
        return self._derived()["crossings"]

    def crossing_count(self) -> int:
        return len(self.crossings())

    def itineraries(self, layer: int) -> list[list]:
        return self._derived()["itineraries"][layer]

    # -- minimization ----------------------------------------------------

    def minimize(self) -> int:
        """Remove empty bigons until none remain; returns bigon count."""
        removed = 0
        before = self.crossing_count()
        while True:
            bigon = _find_bigon(self)
            if bigon is None:
                return removed
            for e, i in bigon:
                seq = self.order[e]
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
            self._invalidate()
            after = self.crossing_count()
            if after != before - 2:
                raise InvalidParamsError(
                    "bigon removal changed crossings by %d" % (after - before)
                )
            before = after
            removed += 1


@dataclass(frozen=True)
class _Crossing:
    """Crossing of one chord from each layer, identified by the chords."""

    tri_index: int
    a: int  # chord index (layer 0)
    b: int  # chord index (layer 1)


def _build_derived(ov: Overlay) -> dict:
    tri = ov.tri
    chords: list[_Chord] = []
    # (layer, edge, k) -> (chord index, end slot), two entries per token
    token_chords: dict[tuple[int, int, int], list[int]] = {}

    # boundary positions: per triangle, sides in order, side view of the
    # merged order (reversed for orientation -1)
    tri_boundary: list[list[tuple[int, int, Token]]] = []  # (edge, side, token)
    for t, sides in enumerate(tri.triangles):
        bitems: list[tuple[int, int, Token]] = []
        side_views: list[list[Token]] = []
        for s_idx, (edge, orient) in enumerate(sides):
            view = list(ov.order[edge])
            if orient == -1:
                view.reverse()
            side_views.append(view)
            bitems.extend((edge, s_idx, tok) for tok in view)
        tri_boundary.append(bitems)

        # per-layer side sequences and corner arcs
        for layer, coords in enumerate(ov.layers):
            w = [coords[e] for e, _ in sides]
            counts = corner_counts(*w)
            if counts is None:
                raise InvalidParamsError("inadmissible layer in overlay")
            # layer's tokens in side order, with boundary positions
            placed: list[list[tuple[int, Token]]] = []
            base = 0
            for s, (edge, orient) in enumerate(sides):
                view = side_views[s]
                own = [
                    (base + i, tok)
                    for i, tok in enumerate(view)
                    if tok[0] == layer
                ]
                placed.append(own)
                base += len(view)
            for j in range(3):
                prev = (j - 1) % 3
                for i in range(1, counts[j] + 1):
                    p = placed[prev][w[prev] - i]
                    q = placed[j][i - 1]
                    idx = len(chords)
                    chords.append(_Chord(t, layer, (p, q)))
                    for pos, tok in (p, q):
                        edge = tri_boundary[t][pos][0]
                        token_chords.setdefault(
                            (layer, edge, tok[1]), []
                        ).append(idx)

    # crossings per triangle between the two layers
    crossings: list[_Crossing] = []
    by_tri: dict[int, tuple[list[int], list[int]]] = {}
    for idx, ch in enumerate(chords):
        slot = by_tri.setdefault(ch.tri_index, ([], []))
        slot[ch.layer].append(idx)
    for t, (la, lb) in sorted(by_tri.items()):
        for ia in la:
            a1, a2 = sorted(chords[ia].positions())
            for ib in lb:
                b1, b2 = sorted(chords[ib].positions())
                if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
                    crossings.append(_Crossing(t, ia, ib))

    # order the crossings along each chord; the other layer's chords are
    # pairwise disjoint, so "closer to this endpoint" is separation order
    on_chord: dict[int, list[int]] = {}
    for ci, cr in enumerate(crossings):
        on_chord.setdefault(cr.a, []).append(ci)
        on_chord.setdefault(cr.b, []).append(ci)

    def sort_along(chord_idx: int) -> list[int]:
        mine = on_chord.get(chord_idx, [])
        if len(mine) <= 1:
            return mine
        ch = chords[chord_idx]
        p1 = ch.ends[0][0]
        boundary_len = len(tri_boundary[ch.tri_index])

        def other(ci: int) -> int:
            cr = crossings[ci]
            return cr.b if chord_idx == cr.a else cr.a

        def key(ci: int) -> int:
            # count crossing chords strictly separating p1 from this one
            d = chords[other(ci)]
            d1, d2 = sorted(d.positions())
            inner = 0
            for cj in mine:
                if cj == ci:
                    continue
                e1, e2 = sorted(chords[other(cj)].positions())
                # is chord e on the p1 side of chord d?
                if _strictly_inside(p1, d1, d2, boundary_len):
                    if _strictly_inside(e1, d1, d2, boundary_len) and (
                        _strictly_inside(e2, d1, d2, boundary_len)
                    ):
                        inner += 1
                else:
                    if not _strictly_inside(e1, d1, d2, boundary_len) and (
                        not _strictly_inside(e2, d1, d2, boundary_len)
                    ):
                        inner += 1
            return inner

        return sorted(mine, key=key)

    chord_orders: dict[int, list[int]] = {
        idx: sort_along(idx) for idx in on_chord
    }

    # strand itineraries: per layer, cyclic lists alternating tokens and
    # (chord, [crossing ids in travel order]) entries
    itineraries: list[list[list]] = [[] for _ in ov.layers]
    for layer in range(len(ov.layers)):
        seen: set[tuple[int, int, int]] = set()
        keys = sorted(k for k in token_chords if k[0] == layer)
        for key in keys:
            if key in seen:
                continue
            cycle: list = []
            cur = key
            prev_chord = None
            while True:
                seen.add(cur)
                cycle.append(("token", cur))
                incident = token_chords[cur]
                if len(incident) != 2:
                    raise InvalidParamsError("token without two incidences")
                if prev_chord is None:
                    nxt_chord = incident[0]
                else:
                    nxt_chord = incident[1] if incident[0] == prev_chord else incident[0]
                ch = chords[nxt_chord]
                this_end = None
                for slot, (pos, tok) in enumerate(ch.ends):
                    edge = tri_boundary[ch.tri_index][pos][0]
                    if (layer, edge, tok[1]) == cur:
                        this_end = slot
                        break
                if this_end is None:
                    raise InvalidParamsError("token not on its chord")
                along = list(chord_orders.get(nxt_chord, []))
                if this_end == 1:
                    along.reverse()
                cycle.append(("chord", nxt_chord, along, this_end))
                far = ch.ends[1 - this_end]
                far_edge = tri_boundary[ch.tri_index][far[0]][0]
                cur = (layer, far_edge, far[1][1])
                prev_chord = nxt_chord
                if cur == key:
                    break
            itineraries[layer].append(cycle)

    return {
        "chords": chords,
        "crossings": crossings,
        "itineraries": itineraries,
        "tri_boundary": tri_boundary,
        "chord_orders": chord_orders,
        "token_chords": token_chords,
    }


def _strictly_inside(pos: int, lo: int, hi: int, n: int) -> bool:
    """pos strictly between lo and hi in the linear boundary order."""
    return lo < pos < hi


def _flatten_strands(ov: Overlay, layer: int) -> list[list]:
    """Cyclic event lists per strand: ('tok', edge, k) and ('cross', id)."""
    out = []
    for cycle in ov.itineraries(layer):
        events: list = []
        for entry in cycle:
            if entry[0] == "token":
                _, (lay, edge, k) = entry
                events.append(("tok", edge, k))
            else:
                _, chord, along, _ = entry
                events.extend(("cross", ci) for ci in along)
        out.append(events)
    return out


def _walk_to_next_crossing(
    events: list, start: int, step: int
) -> tuple[int, list[tuple[int, int]]]:
    """From a crossing event, walk to the next one; returns (index, tokens).

    Tokens are reported in walk order as (edge, k) pairs.  The walk is
    cyclic and guaranteed to terminate because events contains at least
    the starting crossing.
    """
    n = len(events)
    toks: list[tuple[int, int]] = []
    i = start
    while True:
        i = (i + step) % n
        ev = events[i]
        if ev[0] == "cross":
            return i, toks
        toks.append((ev[1], ev[2]))


def _find_bigon(ov: Overlay) -> list[tuple[int, int]] | None:
    """Locate one empty bigon; returns token swaps (edge, position) or None.

    A removable pair is two distinct crossings consecutive along a strand
    of each layer whose connecting arcs cross the same edges at adjacent
    merged positions.
    """
    if len(ov.layers) < 2:
        return None
    crossings = ov.crossings()
    if not crossings:
        return None
    strands0 = _flatten_strands(ov, 0)
    strands1 = _flatten_strands(ov, 1)
    # crossing -> (strand index, event index) on layer 1
    where1: dict[int, tuple[int, int]] = {}
    for si, events in enumerate(strands1):
        for ei, ev in enumerate(events):
            if ev[0] == "cross":
                where1[ev[1]] = (si, ei)

    for events in strands0:
        for ei, ev in enumerate(events):
            if ev[0] != "cross":
                continue
            p = ev[1]
            qi, toks0 = _walk_to_next_crossing(events, ei, +1)
            q = events[qi][1]
            if q == p or not toks0:
                continue
            si1, pi1 = where1[p]
            ev1 = strands1[si1]
            for step in (+1, -1):
                qi1, toks1 = _walk_to_next_crossing(ev1, pi1, step)
                if ev1[qi1][1] != q:
                    continue
                swaps = _corridor_swaps(ov, toks0, toks1)
                if swaps is not None:
                    return swaps
    return None


def _corridor_swaps(
    ov: Overlay,
    toks0: list[tuple[int, int]],
    toks1: list[tuple[int, int]],
) -> list[tuple[int, int]] | None:
    """Validate a candidate bigon corridor; None if not an empty bigon."""
    if len(toks0) != len(toks1):
        return None
    swaps: list[tuple[int, int]] = []
    for (e0, k0), (e1, k1) in zip(toks0, toks1):
        if e0 != e1:
            return None
        seq = ov.order[e0]
        j0 = seq.index((0, k0))
        j1 = seq.index((1, k1))
        if abs(j0 - j1) != 1:
            return None
        swaps.append((e0, min(j0, j1)))
    return swaps


_nintersect_memo: dict[tuple, int] = {}


def minimized_overlay(a: NormalCurve, b: NormalCurve) -> Overlay:
    """Overlay a and b and remove all empty bigons."""
    ov = Overlay([a, b])
    ov.minimize()
    return ov


def nintersect(a: NormalCurve, b: NormalCurve) -> int:
    """Geometric intersection number of two normal multicurves."""
    require_same_triangulation(a, b)
    key = (a.tri.sig, *sorted((a.coords, b.coords)))
    hit = _nintersect_memo.get(key)
    if hit is not None:
        return hit
    if a.coords == b.coords:
        # equal multicurves are isotopic to disjoint copies
        _nintersect_memo[key] = 0
        return 0
    n = minimized_overlay(a, b).crossing_count()
    _nintersect_memo[key] = n
    return n


# ---------------------------------------------------------------------------
# closed words of triangle steps
#
# A transverse closed curve is recorded as the cyclic list of its triangle
# passages (triangle, entry side, exit side).  Such a word is exactly a
# closed walk in the dual graph of the triangulation, and free homotopy of
# the curve is backtrack removal of the walk: a passage entering and
# leaving through the same side.  Backtrack-free closed walks are the
# unique cyclically reduced representatives, so the reduced word's entry
# counts per edge are the normal coordinates of the class (and the empty
# word means the class was null-homotopic).

Step = tuple[int, int, int]  # (triangle, entry side, exit side)


def _other_side(tri: Triangulation, t: int, s: int) -> tuple[int, int]:
    edge = tri.triangles[t][s][0]
    (t1, s1, _), (t2, s2, _) = edge_sides(tri)[edge]
    if (t1, s1) == (t, s):
        return (t2, s2)
    if (t2, s2) == (t, s):
        return (t1, s1)
    raise InvalidParamsError("side lookup mismatch")


def validate_word(tri: Triangulation, word: Sequence[Step]) -> None:
    if not word:
        return
    for i, (t, si, so) in enumerate(word):
        t2, si2, _ = word[(i + 1) % len(word)]
        if _other_side(tri, t, so) != (t2, si2):
            raise InvalidParamsError(f"word breaks at step {i}")


def reduce_word(tri: Triangulation, word: Sequence[Step]) -> list[Step]:
    """Cyclically reduce a closed word by removing same-side passages."""
    w = list(word)
    i = 0
    while i < len(w):
        t, si, so = w[i]
        if si != so:
            i += 1
            continue
        if len(w) == 1:
            return []
        del w[i]
        m = len(w)
        p = (i - 1) % m
        s = i % m
        tp, sip, sop = w[p]
        ts, sis, sos = w[s]
        if p == s:
            merged = (tp, sip, sop)
            w = [merged]
        else:
            # the removed passage sat between these two, so they meet on
            # the same side instance
            if (tp, sop) != (ts, sis):
                raise InvalidParamsError("word reduction lost the gluing")
            merged = (tp, sip, sos)
            del w[max(p, s)]
            w[min(p, s)] = merged
        i = 0
    return w


def word_coords(tri: Triangulation, word: Sequence[Step]) -> tuple[int, ...]:
    coords = [0] * tri.num_edges
    for t, si, _ in word:
        coords[tri.triangles[t][si][0]] += 1
    return tuple(coords)


def word_curve(tri: Triangulation, word: Sequence[Step]) -> NormalCurve | None:
    """Normal form of the class a closed word represents.

    None when the word reduces away (null-homotopic class).  The result
    may still be a puncture link; callers decide whether that counts.
    """
    reduced = reduce_word(tri, word)
    if not reduced:
        return None
    coords = word_coords(tri, reduced)
    if not is_admissible(tri, coords):
        raise InvalidParamsError(f"reduced word has bad coordinates {coords}")
    return NormalCurve(tri, coords)


# ---------------------------------------------------------------------------
# expanded strand walks and Dehn twists

Inst = tuple[int, int]  # (triangle, side)


def _expanded_strands(
    ov: Overlay, layer: int
) -> tuple[list[list], dict[int, int]]:
    """Strand walks with side instances, plus each chord's travel target.

    Events are ('tok', edge, k, exit_inst, enter_inst) for an edge passage
    leaving one triangle and entering the next, and ('x', crossing_id,
    heading_pos) for a crossing met mid-chord while traveling toward the
    chord end at boundary position heading_pos.
    """
    d = ov._derived()
    chords = d["chords"]
    tb = d["tri_boundary"]

    def side_at(chord_idx: int, edge: int, k: int) -> Inst:
        ch = chords[chord_idx]
        for pos, tok in ch.ends:
            e2, s2, tok2 = tb[ch.tri_index][pos]
            if e2 == edge and tok2 == (layer, k):
                return (ch.tri_index, s2)
        raise InvalidParamsError("token missing from chord")

    strands = []
    heading: dict[int, int] = {}
    for cycle in ov.itineraries(layer):
        n = len(cycle)
        events: list = []
        for j in range(0, n, 2):
            _, (lay, edge, k) = cycle[j]
            prev_entry = cycle[(j - 1) % n]
            next_entry = cycle[(j + 1) % n]
            exit_inst = side_at(prev_entry[1], edge, k)
            enter_inst = side_at(next_entry[1], edge, k)
            events.append(("tok", edge, k, exit_inst, enter_inst))
            _, c, along, entered_end = next_entry
            head_pos = chords[c].ends[1 - entered_end][0]
            heading[c] = head_pos
            events.extend(("x", ci, head_pos) for ci in along)
        strands.append(events)
    return strands, heading


def _splice_direction(
    ov: Overlay, ci: int, heading_pos: int, a_heading: dict[int, int], n: int
) -> int:
    """Walk direction (+1/-1) through the twisting curve's event stream.

    A positive twist turns left: toward the chord endpoint that follows
    the travel target counterclockwise among the four endpoints of the
    crossing pair.
    """
    d = ov._derived()
    chords = d["chords"]
    cr = d["crossings"][ci]
    pa = sorted(chords[cr.a].positions())
    pb = sorted(chords[cr.b].positions())
    four = sorted(pa + pb)
    idx = four.index(heading_pos)
    target = four[(idx + 1) % 4] if n > 0 else four[(idx - 1) % 4]
    if target not in pa:
        raise InvalidParamsError("crossing endpoints fail to interleave")
    return 1 if a_heading[cr.a] == target else -1


def _loop_tokens(
    a_events: list, start: int, direction: int
) -> list[tuple[Inst, Inst]]:
    """Token passages of one full trip around the twisting curve."""
    m = len(a_events)
    out: list[tuple[Inst, Inst]] = []
    i = start
    while True:
        i = (i + direction) % m
        if i == start:
            return out
        ev = a_events[i]
        if ev[0] == "tok":
            _, _, _, ex, en = ev
            out.append((ex, en) if direction == 1 else (en, ex))


def _passages_to_word(passages: list[tuple[Inst, Inst]]) -> list[Step]:
    word: list[Step] = []
    for i, (_, enter) in enumerate(passages):
        nxt_exit = passages[(i + 1) % len(passages)][0]
        if enter[0] != nxt_exit[0]:
            raise InvalidParamsError("twist walk left the triangle")
        word.append((enter[0], enter[1], nxt_exit[1]))
    return word


def dehn_twist_curve(along: NormalCurve, target: NormalCurve, n: int) -> NormalCurve:
    """Image of target under the n-th power of the twist along a curve.

    The twisted curve is walked as a word: wherever target crosses the
    twisting curve the walk detours around it |n| times, turning left for
    positive n, and the word is then pulled tight.
    """
    require_same_triangulation(along, target)
    if n == 0:
        return target
    ov = minimized_overlay(along, target)
    if ov.crossing_count() == 0:
        return target
    a_strands, a_heading = _expanded_strands(ov, 0)
    if len(a_strands) != 1:
        raise InvalidParamsError("can only twist along a connected curve")
    a_events = a_strands[0]
    a_pos = {ev[1]: i for i, ev in enumerate(a_events) if ev[0] == "x"}
    b_strands, _ = _expanded_strands(ov, 1)

    tri = along.tri
    total = [0] * tri.num_edges
    for events in b_strands:
        passages: list[tuple[Inst, Inst]] = []
        for ev in events:
            if ev[0] == "tok":
                _, _, _, ex, en = ev
                passages.append((ex, en))
            else:
                _, ci, head_pos = ev
                direction = _splice_direction(ov, ci, head_pos, a_heading, n)
                loop = _loop_tokens(a_events, a_pos[ci], direction)
                passages.extend(loop * abs(n))
        word = _passages_to_word(passages)
        validate_word(tri, word)
        curve = word_curve(tri, word)
        if curve is None:
            raise InvalidParamsError("twisted component vanished")
        for e, w in enumerate(curve.coords):
            total[e] += w
    return NormalCurve(tri, tuple(total))
