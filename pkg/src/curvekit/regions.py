"""Complementary regions of curves in a minimal-position overlay.

Cutting the surface along a system of curves (or curve arcs) leaves
regions.  Each region is identified combinatorially from the overlay: the
triangles are planar graphs whose nodes are corners, edge tokens and
crossings, and whose segments are boundary gaps and chord pieces.  Faces
of those graphs, glued across triangulation edges and across the pieces
of non-cutting (passive) curves, are the regions.

The Euler characteristic of a region counts punctures as interior
vertices, so a computed value of 1 means a disk once its punctures are
forgotten; the puncture count is tracked separately.  Boundary circuits
are traced along cutting pieces and carry the closed word they spell in
the dual graph, from which the circuit's free homotopy class is read off
in normal coordinates.

The cutting set may be a whole layer or any union of a layer with single
pieces of the other; the latter is how a region gets cut along one arc of
a transversal curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import SurfaceSig, complexity
from .errors import InvalidParamsError
from .surfaces import (
    NormalCurve,
    Triangulation,
    is_essential,
    vertex_classes,
)
from .arrangement import (
    Overlay,
    Step,
    minimized_overlay,
    validate_word,
    word_curve,
)

NodeKey = tuple
SegKey = tuple
Piece = tuple[int, int]  # (chord index, piece index along the chord)


@dataclass(frozen=True)
class _Seg:
    key: SegKey  # ("b", t, i) boundary gap or ("c", chord, piece)
    n1: NodeKey
    n2: NodeKey
    meta: tuple = ()  # boundary gaps: (triangle, side, edge, intrinsic gap)


@dataclass
class Circuit:
    """One boundary circuit of a region, traced along cutting pieces."""

    darts: list[int]
    pieces: tuple[Piece, ...]
    steps: list[Step]
    curve: NormalCurve | None  # free homotopy class, None if it bounds
    region: int = -1


@dataclass
class Region:
    """One complementary region of the cutting system."""

    index: int
    faces: frozenset[int]
    chi: int  # punctures counted as filled interior points
    punctures: int
    circuits: list[Circuit] = field(default_factory=list)

    @property
    def boundary_count(self) -> int:
        return len(self.circuits)

    @property
    def genus(self) -> int:
        g2 = 2 - self.chi - self.boundary_count
        if g2 < 0 or g2 % 2:
            raise InvalidParamsError(
                f"region has no surface type: chi={self.chi} b={self.boundary_count}"
            )
        return g2 // 2

    @property
    def ends(self) -> int:
        return self.boundary_count + self.punctures

    @property
    def sig(self) -> SurfaceSig:
        return SurfaceSig(self.genus, self.ends)

    @property
    def complexity(self) -> int:
        return complexity(self.sig)

    def is_trivial(self) -> bool:
        """Disk or once-punctured disk: absorbed when filling."""
        return self.chi == 1 and self.punctures <= 1

    def descriptor(self) -> tuple:
        classes = sorted(
            c.curve.coords if c.curve is not None else () for c in self.circuits
        )
        return (self.genus, self.boundary_count, self.punctures, tuple(classes))


class RegionComplex:
    """All regions of an overlay relative to a chosen cutting system."""

    def __init__(
        self,
        ov: Overlay,
        cutting_layers: Iterable[int],
        extra_pieces: Iterable[Piece] = (),
    ):
        self.ov = ov
        self.tri: Triangulation = ov.tri
        self.cutting_layers = frozenset(cutting_layers)
        self.extra_pieces = frozenset(extra_pieces)
        for layer in self.cutting_layers:
            if not 0 <= layer < len(ov.layers):
                raise InvalidParamsError(f"no layer {layer} in overlay")
        _build_regions(self)

    def is_cutting_piece(self, chord: int, piece: int) -> bool:
        if self.ov.chords()[chord].layer in self.cutting_layers:
            return True
        return (chord, piece) in self.extra_pieces

    @property
    def regions(self) -> list[Region]:
        return self._regions

    def region_of_face(self, face: int) -> Region:
        return self._regions[self._face_region[face]]

    def region_of_piece(self, chord: int, piece: int) -> Region:
        """Region a passive piece lies in."""
        if self.is_cutting_piece(chord, piece):
            raise InvalidParamsError("piece is on the boundary, not in a region")
        fwd = self._piece_darts[(chord, piece)][0]
        return self.region_of_face(self._dart_face[fwd])

    def region_of_vertex(self, vertex: int) -> Region:
        return self._regions[self._vertex_region[vertex]]


# ---------------------------------------------------------------------------
# cell structure


def _build_regions(rc: RegionComplex) -> None:
    ov = rc.ov
    tri = rc.tri
    d = ov._derived()
    chords = d["chords"]
    crossings = d["crossings"]
    tb = d["tri_boundary"]
    chord_orders = d["chord_orders"]

    segs: list[_Seg] = []
    # (triangle, boundary position) -> (chord, end slot)
    token_end: dict[tuple[int, int], tuple[int, int]] = {}
    for c, ch in enumerate(chords):
        for ei, (pos, _tok) in enumerate(ch.ends):
            token_end[(ch.tri_index, pos)] = (c, ei)

    glue: dict[tuple[int, int], list[int]] = {}  # (edge, intrinsic gap) -> segs
    bseg_from: dict[NodeKey, int] = {}  # boundary segment leaving this node
    bseg_into: dict[NodeKey, int] = {}

    for t, entries in enumerate(tb):
        blocks: list[list[int]] = [[], [], []]
        for pos, (_edge, s, _tok) in enumerate(entries):
            blocks[s].append(pos)
        cyc: list[NodeKey] = []
        meta: list[tuple[int, int]] = []  # (side, side gap) of segment from cyc[i]
        for j in range(3):
            cyc.append(("P", t, j))
            meta.append((j, 0))
            for i, pos in enumerate(blocks[j]):
                cyc.append(("T", t, pos))
                meta.append((j, i + 1))
        m = len(cyc)
        for i in range(m):
            side, sgap = meta[i]
            edge, orient = tri.triangles[t][side]
            k_edge = len(ov.order[edge])
            igap = sgap if orient == 1 else k_edge - sgap
            seg_id = len(segs)
            segs.append(
                _Seg(("b", t, i), cyc[i], cyc[(i + 1) % m], (t, side, edge, igap))
            )
            glue.setdefault((edge, igap), []).append(seg_id)
            bseg_from[cyc[i]] = seg_id
            bseg_into[cyc[(i + 1) % m]] = seg_id

    piece_segs: dict[Piece, int] = {}
    for c, ch in enumerate(chords):
        xs = chord_orders.get(c, [])
        chain: list[NodeKey] = [("T", ch.tri_index, ch.ends[0][0])]
        chain.extend(("X", ci) for ci in xs)
        chain.append(("T", ch.tri_index, ch.ends[1][0]))
        for p in range(len(xs) + 1):
            piece_segs[(c, p)] = len(segs)
            segs.append(_Seg(("c", c, p), chain[p], chain[p + 1]))

    for pair in glue.values():
        if len(pair) != 2:
            raise InvalidParamsError("edge gap not glued exactly twice")

    # darts: seg * 2, bit 0 forward (n1 -> n2)
    def head(dart: int) -> NodeKey:
        seg = segs[dart >> 1]
        return seg.n2 if dart & 1 == 0 else seg.n1

    # ccw rotations
    rot: dict[NodeKey, list[int]] = {}
    for t in range(len(tri.triangles)):
        for j in range(3):
            node = ("P", t, j)
            rot[node] = [bseg_from[node] * 2, bseg_into[node] * 2 + 1]
    for (t, pos), (c, ei) in token_end.items():
        node = ("T", t, pos)
        xs = chord_orders.get(c, [])
        if ei == 0:
            d_chord = piece_segs[(c, 0)] * 2
        else:
            d_chord = piece_segs[(c, len(xs))] * 2 + 1
        rot[node] = [bseg_from[node] * 2, d_chord, bseg_into[node] * 2 + 1]
    for ci, cr in enumerate(crossings):
        node = ("X", ci)
        leads: list[tuple[int, int]] = []
        for c in (cr.a, cr.b):
            i = chord_orders[c].index(ci)
            leads.append((chords[c].ends[0][0], piece_segs[(c, i)] * 2 + 1))
            leads.append((chords[c].ends[1][0], piece_segs[(c, i + 1)] * 2))
        leads.sort()
        rot[node] = [dart for _pos, dart in leads]

    rot_pos: dict[int, tuple[NodeKey, int]] = {}
    for node, darts in rot.items():
        for i, dart in enumerate(darts):
            rot_pos[dart] = (node, i)

    def phi(dart: int) -> int:
        # next dart of the face on the left: clockwise successor of the twin
        node, i = rot_pos[dart ^ 1]
        darts = rot[node]
        return darts[(i - 1) % len(darts)]

    # faces: orbits of phi; the outer face of each triangle is dropped
    dart_face: dict[int, int] = {}
    n_faces = 0
    for start in range(len(segs) * 2):
        if start in dart_face:
            continue
        cur = start
        while cur not in dart_face:
            dart_face[cur] = n_faces
            cur = phi(cur)
        if cur != start:
            raise InvalidParamsError("face tracing did not close up")
        n_faces += 1
    OUTER = -1
    outer_faces = set()
    for t in range(len(tri.triangles)):
        outer_faces.add(dart_face[bseg_from[("P", t, 0)] * 2 + 1])
    if len(outer_faces) != len(tri.triangles):
        raise InvalidParamsError("outer faces of triangles collided")
    for dart, f in dart_face.items():
        if f in outer_faces:
            dart_face[dart] = OUTER

    # glue faces into regions
    parent = list(range(n_faces))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    def face_of(dart: int) -> int:
        f = dart_face[dart]
        if f == OUTER:
            raise InvalidParamsError("region walk reached an outer face")
        return f

    partner: dict[int, int] = {}
    for (edge, igap), (s1, s2) in glue.items():
        union(face_of(s1 * 2), face_of(s2 * 2))
        partner[s1] = s2
        partner[s2] = s1

    is_cut = rc.is_cutting_piece
    for (c, p), seg_id in piece_segs.items():
        if not is_cut(c, p):
            union(face_of(seg_id * 2), face_of(seg_id * 2 + 1))

    roots: dict[int, int] = {}
    for f in range(n_faces):
        if f in outer_faces:
            continue
        roots.setdefault(find(f), len(roots))
    face_region = {
        f: roots[find(f)] for f in range(n_faces) if f not in outer_faces
    }
    regions = [
        Region(index=i, faces=frozenset(), chi=0, punctures=0)
        for i in range(len(roots))
    ]
    faces_by_region: dict[int, set[int]] = {i: set() for i in range(len(roots))}
    for f, r in face_region.items():
        faces_by_region[r].add(f)

    # interior cells: chi = V_int - E_int + F per region
    chi = [len(faces_by_region[i]) for i in range(len(roots))]
    for s1, _s2 in glue.values():
        chi[face_region[face_of(s1 * 2)]] -= 1
    for (c, p), seg_id in piece_segs.items():
        if not is_cut(c, p):
            chi[face_region[face_of(seg_id * 2)]] -= 1

    vertex_region: dict[int, int] = {}
    for v, corners in enumerate(vertex_classes(tri)):
        rs = {
            face_region[face_of(bseg_from[("P", t, j)] * 2)] for (t, j) in corners
        }
        if len(rs) != 1:
            raise InvalidParamsError("puncture corners split across regions")
        r = rs.pop()
        vertex_region[v] = r
        chi[r] += 1

    def end_piece(c: int, ei: int) -> int:
        return 0 if ei == 0 else len(chord_orders.get(c, []))

    token_sites: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
    for t, entries in enumerate(tb):
        for pos, (edge, _s, tok) in enumerate(entries):
            token_sites.setdefault((tok[0], edge, tok[1]), []).append((t, pos))
    for key, sites in token_sites.items():
        flags = []
        for t, pos in sites:
            c, ei = token_end[(t, pos)]
            flags.append(is_cut(c, end_piece(c, ei)))
        if len(set(flags)) != 1:
            raise InvalidParamsError("cutting spec splits a curve at a token")
        if flags[0]:
            continue
        t, pos = sites[0]
        chi[face_region[face_of(bseg_from[("T", t, pos)] * 2)]] += 1
    for ci, cr in enumerate(crossings):
        pieces_cut = []
        for c in (cr.a, cr.b):
            i = chord_orders[c].index(ci)
            pieces_cut.append(is_cut(c, i))
            pieces_cut.append(is_cut(c, i + 1))
        if not any(pieces_cut):
            fwd = piece_segs[(cr.a, chord_orders[cr.a].index(ci))] * 2
            chi[face_region[face_of(fwd)]] += 1

    for i, r in enumerate(regions):
        regions[i] = Region(
            index=i,
            faces=frozenset(faces_by_region[i]),
            chi=chi[i],
            punctures=sum(1 for v in vertex_region.values() if v == i),
        )

    # boundary circuits along cutting pieces
    cutting_darts: list[int] = []
    for (c, p), seg_id in piece_segs.items():
        if is_cut(c, p):
            cutting_darts.extend((seg_id * 2, seg_id * 2 + 1))

    def succ(dart: int) -> tuple[int, list[tuple[tuple[int, int], tuple[int, int]]]]:
        events = []
        x = phi(dart)
        while True:
            seg = segs[x >> 1]
            if seg.key[0] == "c":
                if is_cut(seg.key[1], seg.key[2]):
                    return x, events
                x = phi(x ^ 1)
            else:
                if x & 1:
                    raise InvalidParamsError("region walk left the surface")
                other = partner[x >> 1]
                t1, s1, _e, _g = seg.meta
                t2, s2, _e2, _g2 = segs[other].meta
                events.append(((t1, s1), (t2, s2)))
                x = phi(other * 2)

    visited: set[int] = set()
    circuits: list[Circuit] = []
    for d0 in cutting_darts:
        if d0 in visited:
            continue
        darts = []
        all_events = []
        cur = d0
        while True:
            visited.add(cur)
            darts.append(cur)
            cur, events = succ(cur)
            all_events.extend(events)
            if cur == d0:
                break
        # a circuit that never crosses an edge stays inside one triangle
        # (an even polygon of crossing pieces) and bounds a disk there
        steps: list[Step] = []
        n = len(all_events)
        for i in range(n):
            (_xt, _xs), (et, es) = all_events[i]
            (xt2, xs2), _enter2 = all_events[(i + 1) % n]
            if xt2 != et:
                raise InvalidParamsError("circuit word lost its triangle")
            steps.append((et, es, xs2))
        validate_word(tri, steps)
        circ = Circuit(
            darts=darts,
            pieces=tuple((segs[d >> 1].key[1], segs[d >> 1].key[2]) for d in darts),
            steps=steps,
            curve=word_curve(tri, steps),
        )
        circ.region = face_region[face_of(d0)]
        for d in darts:
            if face_region[face_of(d)] != circ.region:
                raise InvalidParamsError("circuit touches two regions")
        circuits.append(circ)
        regions[circ.region].circuits.append(circ)

    # global consistency: regions plus the cutting set rebuild the surface
    n_cutcut = 0
    cut_ends = 0
    for ci, cr in enumerate(crossings):
        flags = []
        for c in (cr.a, cr.b):
            i = chord_orders[c].index(ci)
            flags.extend((is_cut(c, i), is_cut(c, i + 1)))
        a_cut = flags[0] or flags[1]
        b_cut = flags[2] or flags[3]
        if a_cut and b_cut:
            n_cutcut += 1
            cut_ends += sum(flags)
    chi_graph = n_cutcut - cut_ends // 2 if n_cutcut else 0
    chi_surface = 2 - 2 * tri.sig.genus - tri.sig.punctures
    total = sum(r.chi - r.punctures for r in regions)
    if total != chi_surface - chi_graph:
        raise InvalidParamsError(
            f"region Euler characteristics sum to {total}, "
            f"expected {chi_surface - chi_graph}"
        )

    rc._regions = regions
    rc._face_region = face_region
    rc._vertex_region = vertex_region
    rc._dart_face = dart_face
    rc._piece_darts = {
        piece: (seg_id * 2, seg_id * 2 + 1) for piece, seg_id in piece_segs.items()
    }


# ---------------------------------------------------------------------------
# passive strand location


@dataclass
class PassiveArc:
    """Maximal run of a passive strand between crossings, inside one region."""

    layer: int
    strand: int
    pieces: tuple[Piece, ...]
    region: int


@dataclass
class PassiveLoop:
    """Whole passive strand without crossings, inside one region."""

    layer: int
    strand: int
    coords: tuple[int, ...]
    region: int


def passive_parts(
    rc: RegionComplex, layer: int
) -> tuple[list[PassiveArc], list[PassiveLoop]]:
    """Split a passive layer's strands into arcs between crossings and loops."""
    if layer in rc.cutting_layers:
        raise InvalidParamsError("layer is cutting, not passive")
    ov = rc.ov
    d = ov._derived()
    chord_orders = d["chord_orders"]
    tri = rc.tri
    arcs: list[PassiveArc] = []
    loops: list[PassiveLoop] = []
    for si, strand in enumerate(ov.itineraries(layer)):
        run: list[Piece | None] = []  # pieces with None marking crossings
        edge_counts = [0] * tri.num_edges
        for item in strand:
            if item[0] == "token":
                edge_counts[item[1][1]] += 1
                continue
            _tag, c, along, entered_end = item
            m = len(chord_orders.get(c, []))
            order = range(m + 1) if entered_end == 0 else range(m, -1, -1)
            first = True
            for p in order:
                if not first:
                    run.append(None)
                run.append((c, p))
                first = False
        if None not in run:
            fwd = rc._piece_darts[run[0]][0]
            loops.append(
                PassiveLoop(
                    layer=layer,
                    strand=si,
                    coords=tuple(edge_counts),
                    region=rc._face_region[rc._dart_face[fwd]],
                )
            )
            continue
        # rotate so the run starts right after a crossing
        start = run.index(None)
        run = run[start + 1 :] + run[:start]
        chunk: list[Piece] = []
        for item in run + [None]:
            if item is not None:
                chunk.append(item)
                continue
            fwd = rc._piece_darts[chunk[0]][0]
            arcs.append(
                PassiveArc(
                    layer=layer,
                    strand=si,
                    pieces=tuple(chunk),
                    region=rc._face_region[rc._dart_face[fwd]],
                )
            )
            chunk = []
    return arcs, loops


# ---------------------------------------------------------------------------
# filling


def fills(a: NormalCurve, b: NormalCurve) -> bool:
    """Whether the two curves together fill the surface.

    True when every complementary region is a disk or a once-punctured
    disk.
    """
    ov = minimized_overlay(a, b)
    rc = RegionComplex(ov, cutting_layers=(0, 1))
    return all(r.is_trivial() for r in rc.regions)


def boundary_of_filling(a: NormalCurve, b: NormalCurve) -> tuple[NormalCurve, ...]:
    """Essential boundary of the subsurface the two curves fill.

    The filled subsurface is a neighborhood of the union with trivial
    regions absorbed; its boundary consists of the circuit classes of the
    remaining regions.  Empty when the pair fills the whole surface.
    """
    ov = minimized_overlay(a, b)
    rc = RegionComplex(ov, cutting_layers=(0, 1))
    out: dict[tuple[int, ...], NormalCurve] = {}
    for r in rc.regions:
        if r.is_trivial():
            continue
        for circ in r.circuits:
            if circ.curve is None or not is_essential(circ.curve):
                continue
            out.setdefault(circ.curve.coords, circ.curve)
    return tuple(out[k] for k in sorted(out))


def complementary_components(curve: NormalCurve) -> RegionComplex:
    """Regions of the complement of one curve (or multicurve)."""
    ov = Overlay([curve])
    return RegionComplex(ov, cutting_layers=(0,))
