"""Normal-coordinate curves on canonical triangulations of the four
supported punctured surfaces.

Each signature gets one fixed ideal triangulation whose vertices are the
punctures.  A multicurve is a vector of nonnegative edge weights subject to
the usual matching conditions (even corner sums, triangle inequalities);
such a vector determines a unique multicurve up to isotopy, realized inside
each triangle by disjoint arcs cutting off corners.  Components are read
off by tracing arcs through the gluing, and a component is essential
exactly when its weight vector is not one of the puncture-link vectors.

Triangle conventions.  A triangle lists its three sides in counterclockwise
order; side j runs from corner j to corner j+1, and a side is a pair
(edge, orient) with orient +1 when the side agrees with the edge's
intrinsic direction.  Every edge appears in exactly two sides, once with
each orientation.  Points where a curve crosses edge e are numbered 1..w_e
along the intrinsic direction.  Inside a triangle with side weights
(w0, w1, w2) the arcs cutting off corner j number

    t_j = (w_{j-1} + w_j - w_{j+1}) / 2        (indices mod 3)

and the i-th arc of corner j joins the i-th point from the corner on each
of the two adjacent sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .core import S04, S05, S11, S12, SurfaceSig, require_supported
from .errors import (
    InvalidParamsError,
    TriangulationMismatchError,
    UnsupportedSignatureError,
)
from .farey import Slope

Side = tuple[int, int]  # (edge id, orientation +1/-1)


@dataclass(frozen=True)
class Triangulation:
    """Ideal triangulation with punctures as vertices."""

    sig: SurfaceSig
    num_edges: int
    triangles: tuple[tuple[Side, Side, Side], ...]

    def __post_init__(self) -> None:
        seen: dict[int, list[int]] = {e: [] for e in range(self.num_edges)}
        for tri in self.triangles:
            for edge, orient in tri:
                seen[edge].append(orient)
        for edge, orients in seen.items():
            if sorted(orients) != [-1, 1]:
                raise InvalidParamsError(f"edge {edge} is not glued to two sides")

    def __str__(self) -> str:
        return f"tri({self.sig})"


def _edge_sides(tri: Triangulation) -> dict[int, list[tuple[int, int, int]]]:
    """edge -> the (triangle, side, orient) pairs where it appears."""
    out: dict[int, list[tuple[int, int, int]]] = {e: [] for e in range(tri.num_edges)}
    for t, sides in enumerate(tri.triangles):
        for s, (edge, orient) in enumerate(sides):
            out[edge].append((t, s, orient))
    return out


@lru_cache(maxsize=None)
def edge_sides(tri: Triangulation) -> dict[int, list[tuple[int, int, int]]]:
    return _edge_sides(tri)


@lru_cache(maxsize=None)
def vertex_classes(tri: Triangulation) -> list[list[tuple[int, int]]]:
    """Orbits of triangle corners under the edge gluings.

    Corner j of a triangle sits between side j-1 (ending there) and side j
    (starting there).  Two corners are identified when they sit at the same
    intrinsic endpoint of a shared edge.
    """
    corners = [(t, j) for t in range(len(tri.triangles)) for j in range(3)]
    parent = {c: c for c in corners}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for edge, apps in edge_sides(tri).items():
        (t1, s1, o1), (t2, s2, o2) = apps
        # corner at the intrinsic start of the edge, in each triangle
        start1 = (t1, s1 if o1 == 1 else (s1 + 1) % 3)
        start2 = (t2, s2 if o2 == 1 else (s2 + 1) % 3)
        union(start1, start2)
        end1 = (t1, (s1 + 1) % 3 if o1 == 1 else s1)
        end2 = (t2, (s2 + 1) % 3 if o2 == 1 else s2)
        union(end1, end2)
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for c in corners:
        groups.setdefault(find(c), []).append(c)
    return sorted(groups.values())


@lru_cache(maxsize=None)
def vertex_link_vectors(tri: Triangulation) -> tuple[tuple[int, ...], ...]:
    """Edge-weight vector of the small curve around each puncture: one
    crossing per edge endpoint at that puncture."""
    c2v = _corner_to_vertex(tri)
    links = [[0] * tri.num_edges for _ in vertex_classes(tri)]
    for edge, apps in edge_sides(tri).items():
        t1, s1, o1 = apps[0]
        start = (t1, s1 if o1 == 1 else (s1 + 1) % 3)
        end = (t1, (s1 + 1) % 3 if o1 == 1 else s1)
        links[c2v[start]][edge] += 1
        links[c2v[end]][edge] += 1
    return tuple(tuple(w) for w in links)


@lru_cache(maxsize=None)
def _corner_to_vertex(tri: Triangulation) -> dict[tuple[int, int], int]:
    out = {}
    for vid, group in enumerate(vertex_classes(tri)):
        for c in group:
            out[c] = vid
    return out


def corner_vertex(tri: Triangulation, t: int, j: int) -> int:
    return _corner_to_vertex(tri)[(t, j)]


# ---------------------------------------------------------------------------
# canonical triangulations


def _tri_s11() -> Triangulation:
    # square torus with one puncture: edges a=0, b=1, diagonal c=2
    return Triangulation(
        sig=S11,
        num_edges=3,
        triangles=(
            ((0, 1), (1, 1), (2, -1)),
            ((2, 1), (0, -1), (1, -1)),
        ),
    )


def _tri_s04() -> Triangulation:
    # tetrahedron, punctures 0..3; edges e01=0 e02=1 e03=2 e12=3 e13=4 e23=5
    return Triangulation(
        sig=S04,
        num_edges=6,
        triangles=(
            ((0, 1), (3, 1), (1, -1)),   # (0,1,2)
            ((1, 1), (5, 1), (2, -1)),   # (0,2,3)
            ((2, 1), (4, -1), (0, -1)),  # (0,3,1)
            ((4, 1), (5, -1), (3, -1)),  # (1,3,2)
        ),
    )


def _tri_s05() -> Triangulation:
    # bipyramid: apexes 0,1 and equator 2,3,4
    # edges e02=0 e03=1 e04=2 e12=3 e13=4 e14=5 e23=6 e34=7 e42=8
    return Triangulation(
        sig=S05,
        num_edges=9,
        triangles=(
            ((0, 1), (6, 1), (1, -1)),   # (0,2,3)
            ((1, 1), (7, 1), (2, -1)),   # (0,3,4)
            ((2, 1), (8, 1), (0, -1)),   # (0,4,2)
            ((4, 1), (6, -1), (3, -1)),  # (1,3,2)
            ((5, 1), (7, -1), (4, -1)),  # (1,4,3)
            ((3, 1), (8, -1), (5, -1)),  # (1,2,4)
        ),
    )


def _tri_s12() -> Triangulation:
    # square torus triangle kept, the other subdivided toward a second
    # puncture: edges a=0, b=1, c=2, spokes d0=3 d1=4 d2=5
    return Triangulation(
        sig=S12,
        num_edges=6,
        triangles=(
            ((0, 1), (1, 1), (2, -1)),
            ((3, 1), (2, 1), (4, -1)),
            ((4, 1), (0, -1), (5, -1)),
            ((5, 1), (1, -1), (3, -1)),
        ),
    )


_CANONICAL = {}


def triangulation_for(sig: SurfaceSig) -> Triangulation:
    require_supported(sig)
    if not _CANONICAL:
        _CANONICAL.update(
            {S11: _tri_s11(), S04: _tri_s04(), S05: _tri_s05(), S12: _tri_s12()}
        )
    return _CANONICAL[sig]


# ---------------------------------------------------------------------------
# normal curves


@dataclass(frozen=True)
class NormalCurve:
    """Multicurve as edge weights on a fixed triangulation.

    Equality of weight vectors is equality of isotopy classes (normal form
    is unique), so this hashes and compares by coordinates.
    """

    tri: Triangulation
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.tri.num_edges:
            raise InvalidParamsError("coordinate length != edge count")
        if any(w < 0 for w in self.coords):
            raise InvalidParamsError("negative edge weight")

    def weight(self) -> int:
        return sum(self.coords)

    def __str__(self) -> str:
        return "(" + " ".join(str(w) for w in self.coords) + ")"


def corner_counts(w0: int, w1: int, w2: int) -> tuple[int, int, int] | None:
    """Arcs cutting off corners 0,1,2 of a triangle with side weights
    (w0, w1, w2), or None when the weights do not match up."""
    if (w0 + w1 + w2) % 2:
        return None
    t0 = (w2 + w0 - w1) // 2
    t1 = (w0 + w1 - w2) // 2
    t2 = (w1 + w2 - w0) // 2
    if t0 < 0 or t1 < 0 or t2 < 0:
        return None
    return (t0, t1, t2)


def is_admissible(tri: Triangulation, coords: Sequence[int]) -> bool:
    if len(coords) != tri.num_edges or any(w < 0 for w in coords):
        return False
    for sides in tri.triangles:
        w = [coords[e] for e, _ in sides]
        if corner_counts(*w) is None:
            return False
    return True


def _point_arcs(curve: NormalCurve) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Neighbor map of curve points (edge, k) via the in-triangle arcs."""
    tri = curve.tri
    nbr: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def intrinsic(side: Side, local: int) -> tuple[int, int]:
        edge, orient = side
        w = curve.coords[edge]
        k = local if orient == 1 else w + 1 - local
        return (edge, k)

    for sides in tri.triangles:
        w = [curve.coords[e] for e, _ in sides]
        counts = corner_counts(*w)
        if counts is None:
            raise InvalidParamsError(f"inadmissible coordinates {curve.coords}")
        for j in range(3):
            prev = (j - 1) % 3
            for i in range(1, counts[j] + 1):
                p = intrinsic(sides[prev], w[prev] + 1 - i)
                q = intrinsic(sides[j], i)
                nbr.setdefault(p, []).append(q)
                nbr.setdefault(q, []).append(p)
    return nbr


def components(curve: NormalCurve) -> list[tuple[int, ...]]:
    """Weight vector of each traced component, sorted."""
    nbr = _point_arcs(curve)
    seen: set[tuple[int, int]] = set()
    out = []
    for start in sorted(nbr):
        if start in seen:
            continue
        w = [0] * curve.tri.num_edges
        prev = None
        cur = start
        while True:
            seen.add(cur)
            w[cur[0]] += 1
            a, b = nbr[cur]
            nxt = b if a == prev else a
            prev, cur = cur, nxt
            if cur == start:
                break
        out.append(tuple(w))
    return sorted(out)


def is_connected(curve: NormalCurve) -> bool:
    return len(components(curve)) == 1


def component_curves(curve: NormalCurve) -> list[NormalCurve]:
    """Distinct component classes (parallel copies collapse to one)."""
    distinct = sorted(set(components(curve)))
    return [NormalCurve(curve.tri, w) for w in distinct]


def inessential_components(curve: NormalCurve) -> list[tuple[int, ...]]:
    links = set(vertex_link_vectors(curve.tri))
    return [w for w in components(curve) if w in links]


def is_essential(curve: NormalCurve) -> bool:
    """Every component avoids the puncture-link patterns."""
    if not any(curve.coords):
        return False
    return not inessential_components(curve)


def make_curve(
    tri: Triangulation, coords: Sequence[int], require_connected: bool = False
) -> NormalCurve:
    coords_t = tuple(int(w) for w in coords)
    if not is_admissible(tri, coords_t):
        raise InvalidParamsError(f"inadmissible coordinates {coords_t}")
    curve = NormalCurve(tri, coords_t)
    if not is_essential(curve):
        raise InvalidParamsError(f"inessential component in {coords_t}")
    if require_connected and not is_connected(curve):
        raise InvalidParamsError(f"coordinates {coords_t} trace a multicurve")
    return curve


def require_same_triangulation(a: NormalCurve, b: NormalCurve) -> None:
    if a.tri != b.tri:
        raise TriangulationMismatchError("curves live on different triangulations")


# ---------------------------------------------------------------------------
# enumeration


def enumerate_curves(tri: Triangulation, bound: int) -> Iterator[NormalCurve]:
    """All single essential curves with every coordinate <= bound,
    lexicographically by coordinates, each exactly once."""
    if bound < 1:
        raise InvalidParamsError("enumeration bound must be >= 1")
    order = _assignment_order(tri)
    position = {e: i for i, e in enumerate(order)}
    # each triangle constrains its last-assigned edge to a parity-locked
    # window around the other two weights
    by_last: dict[int, list[int]] = {}
    for t, sides in enumerate(tri.triangles):
        last = max(position[e] for e, _ in sides)
        by_last.setdefault(last, []).append(t)

    coords = [0] * tri.num_edges

    def allowed_weights(idx: int) -> range:
        e = order[idx]
        lo, hi, parity = 0, bound, None
        for t in by_last.get(idx, []):
            others = [coords[f] for f, _ in tri.triangles[t] if f != e]
            if len(others) != 2:
                continue  # self-glued triangle: leaf admissibility decides
            lo = max(lo, abs(others[0] - others[1]))
            hi = min(hi, others[0] + others[1])
            p = (others[0] + others[1]) % 2
            if parity is None:
                parity = p
            elif parity != p:
                return range(0)
        if parity is not None and lo % 2 != parity:
            lo += 1
        return range(lo, hi + 1, 1 if parity is None else 2)

    def walk(idx: int) -> Iterator[NormalCurve]:
        if idx == len(order):
            if not any(coords) or not is_admissible(tri, coords):
                return
            curve = NormalCurve(tri, tuple(coords))
            if is_connected(curve) and is_essential(curve):
                yield curve
            return
        e = order[idx]
        for w in allowed_weights(idx):
            coords[e] = w
            yield from walk(idx + 1)
        coords[e] = 0

    # re-sort lexicographically by the natural edge order
    found = sorted(walk(0), key=lambda c: c.coords)
    yield from iter(found)


@lru_cache(maxsize=None)
def _assignment_order(tri: Triangulation) -> tuple[int, ...]:
    """Edge order that completes triangles early, so pruning bites."""
    remaining = set(range(tri.num_edges))
    tri_sets = [set(e for e, _ in sides) for sides in tri.triangles]
    order: list[int] = []
    while remaining:
        # prefer the edge finishing (or most advancing) some triangle
        best = min(
            remaining,
            key=lambda e: (
                min(len(ts & remaining) for ts in tri_sets if e in ts),
                e,
            ),
        )
        order.append(best)
        remaining.discard(best)
    return tuple(order)


# ---------------------------------------------------------------------------
# slope dictionaries for the two complexity-1 triangulations


def slope_curve(sig: SurfaceSig, slope: Slope) -> NormalCurve:
    """Normal coordinates of the slope p/q on the canonical triangulation.

    On the torus the three edges see |p|, |q| and |p - q| crossings; the
    four-punctured sphere doubles the pattern across opposite edge pairs.
    """
    tri = triangulation_for(sig)
    p, q = slope.p, slope.q
    a, b, c = abs(p), abs(q), abs(p - q)
    if sig == S11:
        return NormalCurve(tri, (a, b, c))
    if sig == S04:
        return NormalCurve(tri, (a, b, c, c, b, a))
    raise UnsupportedSignatureError(f"no slope dictionary on {sig}")


def curve_slope(curve: NormalCurve) -> Slope:
    """Inverse of slope_curve: recover p/q from normal coordinates.

    The weights give |p|, |q| and |p - q|; the sign of p is pinned by
    checking which choice reproduces the third weight (both work only when
    p or q vanishes, where the choices agree up to normalization).
    """
    sig = curve.tri.sig
    w = curve.coords
    if sig == S11:
        a, b, c = w
    elif sig == S04:
        a, b, c = w[0], w[1], w[2]
        if w != (a, b, c, c, b, a):
            raise InvalidParamsError(f"not a slope curve: {w}")
    else:
        raise UnsupportedSignatureError(f"no slope dictionary on {sig}")
    for p in (a, -a):
        if abs(p - b) == c:
            slope = Slope.make(p, b)
            if slope_curve(sig, slope).coords == w:
                return slope
    raise InvalidParamsError(f"not a slope curve: {w}")


# ---------------------------------------------------------------------------
# curve file format


def format_curves(curves: Sequence[NormalCurve]) -> str:
    if not curves:
        raise InvalidParamsError("nothing to format")
    sig = curves[0].tri.sig
    lines = [f"surface {sig.genus} {sig.punctures}"]
    for c in curves:
        if c.tri.sig != sig:
            raise TriangulationMismatchError("mixed signatures in one file")
        lines.append("curve " + " ".join(str(w) for w in c.coords))
    return "\n".join(lines) + "\n"


def parse_curves(text: str) -> list[NormalCurve]:
    sig: SurfaceSig | None = None
    tri: Triangulation | None = None
    out: list[NormalCurve] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "surface":
            if sig is not None:
                raise InvalidParamsError(f"line {lineno}: duplicate surface header")
            try:
                sig = SurfaceSig(int(fields[1]), int(fields[2]))
            except (IndexError, ValueError) as exc:
                raise InvalidParamsError(f"line {lineno}: bad surface header") from exc
            tri = triangulation_for(sig)
        elif fields[0] == "curve":
            if tri is None:
                raise InvalidParamsError(f"line {lineno}: curve before surface header")
            try:
                coords = [int(w) for w in fields[1:]]
            except ValueError as exc:
                raise InvalidParamsError(f"line {lineno}: bad weight") from exc
            out.append(make_curve(tri, coords))
        else:
            raise InvalidParamsError(f"line {lineno}: unknown directive {fields[0]!r}")
    if not out:
        raise InvalidParamsError("no curves in file")
    return out
