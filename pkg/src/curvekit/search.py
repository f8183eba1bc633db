"""Distance certificates and tight multigeodesics on the two larger
surfaces, plus the geodesic-side checks that need them.

Curve-graph distance is decidable here without any search at all up to
distance 2: equality, disjointness, and filling classify 0, 1, 2 exactly
(two curves at distance >= 3 are exactly the filling pairs).  Distance 3
is certified by exhibiting a path x - w1 - w2 - y; such a path exists
iff some curve w1 disjoint from x fails to fill with y, because then any
essential boundary class of the filling neighborhood of w1 and y closes
the path.  The scan over w1 runs over all curves up to a coordinate cap,
so a successful scan is exact while an empty one only brackets the
distance inside [3, floor(2 log2 i) + 2].

Tight multigeodesics (each interior level equals the essential filling
boundary of its neighbors) are enumerated at distance <= 3 by scanning
the level next to y: that level determines the other interior level as
a filling boundary, and the pair either closes the defining equations or
is discarded.  The scan is complete for middle levels under its
coordinate bound.  On the complexity-1 surfaces every geodesic counts
as tight and the slope dictionary enumerates them outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .arrangement import nintersect
from .bounds import constants_for, floor_two_log2
from .core import (
    MIN_SAFE_CUTOFF,
    complexity,
    log2_or_zero,
    require_supported,
)
from .errors import (
    BudgetExceededError,
    InvalidParamsError,
    NotApplicableError,
)
from .farey import CheckReport, GEODESIC_BUDGET, all_geodesics, graph_distance
from .projections import (
    AnnularSubsurface,
    Subsurface,
    annular_projects,
    annular_slack,
    project_nonannular,
    subsurface_distance,
)
from .regions import boundary_of_filling, fills
from .surfaces import (
    NormalCurve,
    curve_slope,
    enumerate_curves,
    is_connected,
    is_essential,
    make_curve,
    require_same_triangulation,
    slope_curve,
)

DEFAULT_CAP_FACTOR = 4
DEFAULT_SEED_BOUND = 4


@dataclass(frozen=True)
class SearchConfig:
    """Budgets for the witness scans.

    cap: largest edge weight tried for interior path vertices; defaults
    to DEFAULT_CAP_FACTOR times the largest endpoint weight.  seed_bound
    caps the coordinates of the interior levels scanned during
    multigeodesic enumeration; it is separate from cap because every
    candidate there costs filling-boundary computations.
    """

    cap: int | None = None
    seed_bound: int = DEFAULT_SEED_BOUND

    def effective_cap(self, x: NormalCurve, y: NormalCurve) -> int:
        if self.cap is not None:
            if self.cap < 1:
                raise InvalidParamsError("search cap must be >= 1")
            return self.cap
        return DEFAULT_CAP_FACTOR * max(1, *x.coords, *y.coords)


@dataclass(frozen=True)
class LevelBound:
    """Audit row: the a-priori prune for one interior path position.

    log2_bound is log2 of the decay bound on the intersection of a
    geodesic vertex at this position with the far endpoint; effective is
    the coordinate cap actually scanned.  Keeping both columns makes the
    shortcut visible: the scanned cap truncates the enormous guarantee.
    """

    index: int
    log2_bound: float
    effective: int

    def line(self) -> str:
        return (
            f"level {self.index} theorem {self.log2_bound:.6g} "
            f"effective {self.effective}"
        )


@dataclass(frozen=True)
class DistanceCertificate:
    """Distance between two curves, exact or bracketed.

    lower == upper means the value is certified exactly: either by the
    complexity-1 dictionary, by classification through distance 2, or by
    a witness path meeting the classification floor.  Otherwise the pair
    fills and the scans under the effective caps were inconclusive, and
    only the bracket is claimed.  witness, when present, realizes upper.
    """

    x: NormalCurve
    y: NormalCurve
    lower: int
    upper: int
    witness: tuple[NormalCurve, ...] | None
    levels: tuple[LevelBound, ...] = ()
    method: str = "classification"

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise InvalidParamsError("lower bound exceeds upper bound")
        if self.witness is not None and len(self.witness) != self.upper + 1:
            raise InvalidParamsError("witness length does not match upper bound")

    @property
    def exhaustive(self) -> bool:
        return self.lower == self.upper

    @property
    def distance(self) -> int:
        if not self.exhaustive:
            raise NotApplicableError(
                f"distance only bracketed in [{self.lower}, {self.upper}]"
            )
        return self.lower

    def text(self) -> str:
        if self.exhaustive:
            lines = [f"distance: {self.lower}"]
        else:
            lines = [f"distance: {self.lower}..{self.upper}"]
        lines.append(f"exhaustive: {str(self.exhaustive).lower()}")
        if self.witness is not None:
            lines.append("geodesic:")
            for v in self.witness:
                lines.append(_curve_line(v))
        if self.levels:
            lines.append("bounds:")
            for level in self.levels:
                lines.append(level.line())
        return "\n".join(lines) + "\n"


def _curve_line(v: NormalCurve) -> str:
    if complexity(v.tri.sig) == 1:
        return str(curve_slope(v))
    return " ".join(str(w) for w in v.coords)


def _check_vertex(v: NormalCurve, name: str) -> None:
    if not is_connected(v) or not is_essential(v):
        raise InvalidParamsError(f"{name} must be a single essential curve")


def _classify_small(x: NormalCurve, y: NormalCurve) -> int | None:
    """0, 1, or 2 when the distance is that value; None means >= 3."""
    if x.coords == y.coords:
        return 0
    if nintersect(x, y) == 0:
        return 1
    if not fills(x, y):
        return 2
    return None


def _min_curve(curves: Sequence[NormalCurve]) -> NormalCurve:
    return min(curves, key=lambda c: c.coords)


def _fresh_at_bound(tri, bound: int) -> Iterator[NormalCurve]:
    """Essential curves whose largest coordinate is exactly bound, so
    that increasing caps never re-scan the smaller pool."""
    for c in enumerate_curves(tri, bound):
        if max(c.coords) == bound:
            yield c


def _scan_length3(
    x: NormalCurve, y: NormalCurve, cap: int
) -> tuple[NormalCurve, NormalCurve] | None:
    """Smallest-cap witness pair (w1, w2) with x - w1 - w2 - y a path.

    w1 runs over essential curves disjoint from x; whenever w1 does not
    fill with y, every essential boundary class of their filling
    neighborhood is disjoint from both and closes the path.  Scanning in
    increasing coordinate caps and tie-breaking lexicographically keeps
    the result deterministic.
    """
    for bound in range(1, cap + 1):
        hits: list[tuple[NormalCurve, NormalCurve]] = []
        for w1 in _fresh_at_bound(x.tri, bound):
            if w1.coords == x.coords or nintersect(x, w1) != 0:
                continue
            # disjoint from both endpoints would contradict distance >= 3
            if fills(w1, y):
                continue
            mids = boundary_of_filling(w1, y)
            if mids:
                hits.append((w1, _min_curve(mids)))
        if hits:
            return min(hits, key=lambda h: (h[0].coords, h[1].coords))
    return None


def _scan_length4(
    x: NormalCurve, y: NormalCurve, cap: int
) -> tuple[NormalCurve, NormalCurve, NormalCurve] | None:
    """Witness triple for a length-4 walk x - w1 - w2 - w3 - y.

    A middle curve disjoint from both w1 and w3 exists iff w1 and w3 do
    not fill, so the scan only pairs the disjoint-from-x pool against
    the disjoint-from-y pool.
    """
    left = [
        c
        for c in enumerate_curves(x.tri, cap)
        if c.coords != x.coords and nintersect(x, c) == 0
    ]
    right = [
        c
        for c in enumerate_curves(y.tri, cap)
        if c.coords != y.coords and nintersect(y, c) == 0
    ]
    best: tuple[NormalCurve, NormalCurve, NormalCurve] | None = None
    best_key = None
    for w1 in left:
        for w3 in right:
            if w1.coords == w3.coords or fills(w1, w3):
                continue
            mids = boundary_of_filling(w1, w3)
            if not mids:
                continue
            w2 = _min_curve(mids)
            key = (w1.coords, w2.coords, w3.coords)
            if best_key is None or key < best_key:
                best, best_key = (w1, w2, w3), key
    return best


def _decay_levels(
    sig, intersections: int, count: int, effective: int
) -> tuple[LevelBound, ...]:
    lin = constants_for(sig).linear_log2
    base = log2_or_zero(intersections)
    return tuple(
        LevelBound(i, i * lin + base, effective) for i in range(1, count + 1)
    )


def distance(
    x: NormalCurve, y: NormalCurve, config: SearchConfig | None = None
) -> DistanceCertificate:
    """Certified curve-graph distance between two essential curves.

    Complexity 1 goes through the slope dictionary and is always exact,
    with the least geodesic as witness when the path enumerator covers
    the distance.  Complexity 2 classifies 0/1/2 exactly, certifies 3 by
    witness scan, and past that reports the bracket
    [3, floor(2 log2 i) + 2], shrunk to an upper bound of 4 when a
    length-4 walk shows up under the cap; brackets carry exhaustive
    False.
    """
    require_same_triangulation(x, y)
    require_supported(x.tri.sig)
    _check_vertex(x, "x")
    _check_vertex(y, "y")
    cfg = config or SearchConfig()
    sig = x.tri.sig

    if complexity(sig) == 1:
        sx, sy = curve_slope(x), curve_slope(y)
        d = graph_distance(sx, sy)
        witness = None
        if d <= GEODESIC_BUDGET:
            path = all_geodesics(sx, sy)[0]
            witness = tuple(slope_curve(sig, s) for s in path)
        return DistanceCertificate(x, y, d, d, witness, method="dictionary")

    small = _classify_small(x, y)
    if small == 0:
        return DistanceCertificate(x, y, 0, 0, (x,))
    if small == 1:
        return DistanceCertificate(x, y, 1, 1, (x, y))
    if small == 2:
        mid = _min_curve(boundary_of_filling(x, y))
        return DistanceCertificate(x, y, 2, 2, (x, mid, y))

    cap = cfg.effective_cap(x, y)
    ixy = nintersect(x, y)
    ceiling = floor_two_log2(ixy) + 2

    pair3 = _scan_length3(x, y, cap)
    if pair3 is not None:
        w1, w2 = pair3
        levels = _decay_levels(sig, ixy, 2, cap)
        return DistanceCertificate(
            x, y, 3, 3, (x, w1, w2, y), levels, method="witness-scan"
        )
    if ceiling <= 3:
        # the intersection number alone caps the distance at 3
        levels = _decay_levels(sig, ixy, 2, cap)
        return DistanceCertificate(x, y, 3, 3, None, levels, method="interval")

    quad = _scan_length4(x, y, cap)
    if quad is not None:
        w1, w2, w3 = quad
        levels = _decay_levels(sig, ixy, 3, cap)
        return DistanceCertificate(
            x, y, 3, 4, (x, w1, w2, w3, y), levels, method="witness-scan"
        )

    levels = _decay_levels(sig, ixy, ceiling - 1, cap)
    return DistanceCertificate(x, y, 3, ceiling, None, levels, method="interval")


@dataclass(frozen=True)
class TightMultigeodesic:
    """Multigeodesic whose interior levels equal the essential filling
    boundary of their neighbors.

    vertices[i] is the level at distance i from the start; each level is
    a tuple of single curves sorted by coordinates, and the two end
    levels hold one curve each.  The tight flag records that the object
    was produced or verified by the tightness check; on complexity-1
    surfaces the filling-boundary equations are waived and geodesics are
    tight by convention.
    """

    vertices: tuple[tuple[NormalCurve, ...], ...]
    tight: bool = True

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> NormalCurve:
        return self.vertices[0][0]

    @property
    def end(self) -> NormalCurve:
        return self.vertices[-1][0]

    def key(self) -> tuple:
        return tuple(tuple(c.coords for c in lvl) for lvl in self.vertices)


def _level_tuple(curves: Sequence[NormalCurve]) -> tuple[NormalCurve, ...]:
    return tuple(sorted(curves, key=lambda c: c.coords))


def _combined(level: Sequence[NormalCurve]) -> NormalCurve:
    total = [0] * len(level[0].coords)
    for c in level:
        for i, w in enumerate(c.coords):
            total[i] += w
    return make_curve(level[0].tri, total)


def _pair_distance_class(a: NormalCurve, b: NormalCurve) -> int:
    """Distance when <= 2, else 3 meaning 'at least 3'."""
    small = _classify_small(a, b)
    return 3 if small is None else small


def is_tight(
    t: TightMultigeodesic | Sequence[Sequence[NormalCurve]],
) -> bool:
    """Exact re-verification of the multigeodesic and tightness conditions.

    Every pair of curves p > 0 levels apart must realize distance
    exactly min(p, 3); positions three or more apart must fill, and the
    chain through the intermediate levels already caps the distance, so
    the filling check is exact at p = 3.  Lengths past 3 would need
    distance-4 certificates per pair and are refused on the larger
    surfaces.  On complexity-1 surfaces levels must be single slopes,
    the distance condition is checked through the dictionary, and the
    filling-boundary equations are waived.
    """
    levels = t.vertices if isinstance(t, TightMultigeodesic) else tuple(
        tuple(lvl) for lvl in t
    )
    if len(levels) < 2:
        raise InvalidParamsError("need at least two levels")
    if any(not lvl for lvl in levels):
        return False
    anchor = levels[0][0]
    sig = anchor.tri.sig
    for lvl in levels:
        for c in lvl:
            require_same_triangulation(anchor, c)
            if not is_connected(c) or not is_essential(c):
                return False

    if complexity(sig) == 1:
        if any(len(lvl) != 1 for lvl in levels):
            return False
        slopes = [curve_slope(lvl[0]) for lvl in levels]
        return all(
            graph_distance(slopes[p], slopes[q]) == q - p
            for p in range(len(slopes))
            for q in range(p + 1, len(slopes))
        )

    if len(levels) > 4:
        raise BudgetExceededError(
            "tightness verification implemented up to length 3"
        )
    for lvl in levels:
        for i, a in enumerate(lvl):
            for b in lvl[i + 1 :]:
                if a.coords == b.coords or nintersect(a, b) != 0:
                    return False
    for p in range(len(levels)):
        for q in range(p + 1, len(levels)):
            want = min(q - p, 3)
            for a in levels[p]:
                for b in levels[q]:
                    if _pair_distance_class(a, b) != want:
                        return False
    for i in range(1, len(levels) - 1):
        left = _combined(levels[i - 1])
        right = _combined(levels[i + 1])
        if fills(left, right):
            return False
        want = {c.coords for c in boundary_of_filling(left, right)}
        if want != {c.coords for c in levels[i]}:
            return False
    return True


def enumerate_tight_multigeodesics(
    x: NormalCurve,
    y: NormalCurve,
    dmax: int = 3,
    config: SearchConfig | None = None,
) -> list[TightMultigeodesic]:
    """All tight multigeodesics between two curves, distance at most 3.

    Needs an exact distance certificate.  Distances 0 and 1 are trivial
    and distance 2 has the unique interior level, the filling boundary
    of the endpoints.  At distance 3 the level next to y determines the
    level next to x (filling boundary against x), and the defining
    equations either close up or reject the candidate; the scan over
    that level is complete for coordinates under the seed bound, so the
    returned list is complete within that bound.  Existence of a tight
    multigeodesic is guaranteed, so an empty scan reports its budget
    rather than returning an empty list.  On complexity-1 surfaces the
    slope dictionary enumerates the geodesics, tight by convention.
    """
    require_same_triangulation(x, y)
    require_supported(x.tri.sig)
    _check_vertex(x, "x")
    _check_vertex(y, "y")
    if not 0 <= dmax <= 4:
        raise InvalidParamsError("dmax must be between 0 and 4")
    cfg = config or SearchConfig()
    sig = x.tri.sig

    if complexity(sig) == 1:
        sx, sy = curve_slope(x), curve_slope(y)
        if graph_distance(sx, sy) > dmax:
            raise InvalidParamsError("endpoints are further apart than dmax")
        out = []
        for path in all_geodesics(sx, sy):
            levels = tuple((slope_curve(sig, s),) for s in path)
            out.append(TightMultigeodesic(levels))
        out.sort(key=lambda t: t.key())
        return out

    cert = distance(x, y, cfg)
    if not cert.exhaustive:
        raise BudgetExceededError(
            "distance not certified exactly; cannot enumerate complete levels"
        )
    d = cert.distance
    if d > dmax:
        raise InvalidParamsError("endpoints are further apart than dmax")
    if d == 0:
        return [TightMultigeodesic(((x,),))]
    if d == 1:
        return [TightMultigeodesic(((x,), (y,)))]
    if d == 2:
        mid = _level_tuple(boundary_of_filling(x, y))
        levels = ((x,), mid, (y,))
        if not is_tight(levels):
            raise BudgetExceededError(
                "filling boundary fails the distance-2 tightness equations"
            )
        return [TightMultigeodesic(levels)]
    if d >= 4:
        raise BudgetExceededError("enumeration implemented up to distance 3")

    out = []
    seen: set[tuple] = set()
    for v2 in _candidate_levels(x, y, cfg.seed_bound):
        joined = _combined(v2)
        if fills(x, joined):
            continue
        v1 = _level_tuple(boundary_of_filling(x, joined))
        if not v1 or fills(_combined(v1), y):
            continue
        back = {c.coords for c in boundary_of_filling(_combined(v1), y)}
        if back != {c.coords for c in v2}:
            continue
        levels = ((x,), v1, v2, (y,))
        if not is_tight(levels):
            continue
        t = TightMultigeodesic(levels)
        if t.key() not in seen:
            seen.add(t.key())
            out.append(t)
    if not out:
        raise BudgetExceededError(
            f"no tight multigeodesic with middle coordinates <= {cfg.seed_bound}; "
            "raise seed_bound"
        )
    out.sort(key=lambda t: t.key())
    return out


def _candidate_levels(
    x: NormalCurve, y: NormalCurve, bound: int
) -> Iterator[tuple[NormalCurve, ...]]:
    """Multicurve levels that could sit next to y on a length-3
    multigeodesic: every component disjoint from y, crossing x without
    filling.  Levels here have at most two components, the largest
    multicurve the supported surfaces carry."""
    pool = [
        c
        for c in enumerate_curves(y.tri, bound)
        if c.coords != y.coords
        and nintersect(y, c) == 0
        and nintersect(x, c) > 0
        and not fills(x, c)
    ]
    for i, a in enumerate(pool):
        yield (a,)
        for b in pool[i + 1 :]:
            if nintersect(a, b) == 0 and a.coords != b.coords:
                yield _level_tuple((a, b))


def _projects(sub: Subsurface, curves: Sequence[NormalCurve]) -> bool:
    """Whether the side contributes at least one vertex of the
    subsurface's curve graph, the same criterion subsurface_distance
    applies to its arguments."""
    if isinstance(sub, AnnularSubsurface):
        return any(annular_projects(sub.core, c) for c in curves)
    return any(project_nonannular(sub, c).curves for c in curves)


def check_interior_projection_bound(
    t: TightMultigeodesic, sub: Subsurface
) -> CheckReport:
    """On a tight multigeodesic, any interior level that projects to a
    proper subsurface stays within the safe cutoff of one endpoint.

    Annular targets on the larger surfaces are measured by the twist
    surrogate, so the cutoff is padded by the surrogate slack there.
    Interior levels missing the subsurface are skipped; if none projects
    the check does not apply.
    """
    if t.length < 2:
        raise NotApplicableError("no interior level")
    pad = 0
    if isinstance(sub, AnnularSubsurface) and complexity(sub.ambient) > 1:
        pad = annular_slack(sub.ambient)
    x_lvl, y_lvl = t.vertices[0], t.vertices[-1]
    checked = 0
    applicable = 0
    failures: list[str] = []
    for i in range(1, len(t.vertices) - 1):
        lvl = t.vertices[i]
        if not _projects(sub, lvl):
            continue
        applicable += 1
        sides = []
        if _projects(sub, x_lvl):
            sides.append(subsurface_distance(sub, x_lvl, lvl))
        if _projects(sub, y_lvl):
            sides.append(subsurface_distance(sub, lvl, y_lvl))
        if not sides:
            continue
        checked += 1
        if min(sides) > MIN_SAFE_CUTOFF + pad:
            failures.append(
                f"level {i}: side distances {sides} both exceed {MIN_SAFE_CUTOFF}"
            )
    if applicable == 0:
        raise NotApplicableError("no interior level projects to the subsurface")
    return CheckReport(
        "interior-projection-bound",
        not failures,
        checked,
        failures,
        note=f"applicable levels: {applicable}",
    )


def check_intersection_decay(
    t: TightMultigeodesic, y: NormalCurve | None = None
) -> CheckReport:
    """Intersection with the far endpoint decays along a tight
    multigeodesic by a fixed per-step factor, checked exactly.

    The factor is the complexity times a power of two, so its log2 is an
    integer and the comparison reduces to a bit-length test; no
    astronomic number is materialized.  On complexity 1 the sharp
    per-step factor 2/3 is asserted as well.
    """
    target = y if y is not None else t.end
    require_same_triangulation(t.start, target)
    lin = constants_for(t.start.tri.sig).linear_log2
    ixy = sum(nintersect(c, target) for c in t.vertices[0])
    checked = 0
    failures: list[str] = []
    values = []
    for i, lvl in enumerate(t.vertices):
        lhs = sum(nintersect(c, target) for c in lvl)
        values.append(lhs)
        if i == 0:
            continue
        checked += 1
        if lhs == 0:
            continue
        if ixy == 0:
            failures.append(f"level {i}: positive intersection from a zero start")
            continue
        # lhs <= 2**(i*lin) * ixy iff ceil(lhs / ixy) <= 2**(i*lin)
        q = -(-lhs // ixy)
        if q > 1 and (q - 1).bit_length() > i * lin:
            failures.append(f"level {i}: intersection {lhs} above decay bound")
    if complexity(t.start.tri.sig) == 1:
        for i in range(len(values) - 1):
            checked += 1
            if 3 * values[i + 1] > 2 * values[i]:
                failures.append(
                    f"step {i}: sharp 2/3 decay fails "
                    f"({values[i + 1]} vs {values[i]})"
                )
    return CheckReport(
        "intersection-decay",
        not failures,
        checked,
        failures,
        note=f"per-step log2 factor {lin}",
    )
