"""Subsurface projections and projection distances.

A subsurface is either an annulus around an essential curve or a
complementary region of an essential multicurve system.  Non-annular
subsurfaces are identified by the system together with a region selector;
the region's topological descriptor (genus, boundary pattern, punctures,
boundary classes) must be unique among the system's regions so the same
subsurface can be located inside any overlay that contains the system as
a cutting layer.

Projection of a transversal curve to a non-annular region follows the
usual surgery: closed components inside the region map to themselves,
and each arc of the intersection contributes the essential boundary
components of a neighborhood of the arc together with the region
boundary it touches.  Those components are computed exactly by cutting
the region along the arc and reading off the boundary circuits of the
cut that traverse it.  Curves essential in the region are exactly the
ambient-essential curves not parallel to a region boundary circuit, so
the filter works on ambient classes.

Distances inside a projection target:

* region with one handle or four ends: the region's curve set is a copy
  of the Farey graph, found by picking a basis triple of curves in the
  region and reading each curve's slope from its intersection numbers
  with the triple; distances are then exact graph distances.
* annulus in a twice-punctured torus or five-punctured sphere: measured
  by the twisting surrogate |argmin_n i(T^n u, v)| + 2, exact on twist
  families and within 2 of the annular distance in general; checkers
  consuming it widen their slack accordingly.
* annulus in a once-punctured torus or four-punctured sphere: exact,
  through the strip-cover winding model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arrangement import Overlay, dehn_twist_curve, minimized_overlay, nintersect
from .core import SurfaceSig, complexity, euler_characteristic
from .errors import (
    BudgetExceededError,
    EmptyProjectionError,
    InvalidParamsError,
    InvalidSubsurfaceError,
    UnsupportedSignatureError,
)
from .farey import CheckReport, Slope, farey_surface, graph_distance
from .farey import annular_distance as farey_annular_distance
from .regions import Piece, RegionComplex, complementary_components
from .regions import passive_parts
from .surfaces import (
    NormalCurve,
    curve_slope,
    enumerate_curves,
    is_essential,
    require_same_triangulation,
    triangulation_for,
)


@dataclass(frozen=True)
class AnnularSubsurface:
    """Annulus around an essential (connected) core curve."""

    core: NormalCurve

    @property
    def ambient(self) -> SurfaceSig:
        return self.core.tri.sig


class NonAnnularSubsurface:
    """One complementary region of an essential multicurve system.

    The selector picks a region of the system's complement; the region
    must carry curves (one handle or at least four ends) and must be the
    only region with its descriptor, otherwise it cannot be relocated
    inside other overlays.
    """

    def __init__(self, system: NormalCurve, selector: int):
        if not is_essential(system):
            raise InvalidSubsurfaceError("boundary system is not essential")
        self.system = system
        self.selector = selector
        rc = complementary_components(system)
        if not 0 <= selector < len(rc.regions):
            raise InvalidSubsurfaceError(
                f"no region {selector}: complement has {len(rc.regions)}"
            )
        region = rc.regions[selector]
        if complexity(region.sig) < 1:
            raise InvalidSubsurfaceError(
                f"region of type {region.sig} carries no curves"
            )
        self.sig = region.sig
        self.descriptor = region.descriptor()
        matches = [r for r in rc.regions if r.descriptor() == self.descriptor]
        if len(matches) > 1:
            raise InvalidSubsurfaceError(
                "region descriptor is ambiguous; the subsurface cannot be "
                "located inside other overlays"
            )
        self.boundary_classes = frozenset(
            c.curve.coords for c in region.circuits if c.curve is not None
        )
        self._chart: _SlopeChart | None = None

    @property
    def ambient(self) -> SurfaceSig:
        return self.system.tri.sig

    def locate(self, rc: RegionComplex) -> int:
        """Index of this subsurface among the regions of a cut complex
        whose cutting layer is the same system."""
        hits = [
            r.index for r in rc.regions if r.descriptor() == self.descriptor
        ]
        if len(hits) != 1:
            raise InvalidSubsurfaceError(
                f"descriptor matched {len(hits)} regions, expected one"
            )
        return hits[0]


Subsurface = AnnularSubsurface | NonAnnularSubsurface


def subsurfaces_of(system: NormalCurve) -> list[NonAnnularSubsurface]:
    """All complementary regions of the system that carry curves."""
    rc = complementary_components(system)
    out = []
    for i, region in enumerate(rc.regions):
        if complexity(region.sig) >= 1:
            out.append(NonAnnularSubsurface(system, i))
    return out


# ---------------------------------------------------------------------------
# projection to a non-annular region


@dataclass
class ArcProjection:
    """Projection data of one arc of the source curve inside the region."""

    pieces: tuple[Piece, ...]
    feet: frozenset[int]  # region boundary circuits touched by the arc
    curves: tuple[NormalCurve, ...]  # essential classes of the surgery


@dataclass
class ProjectionResult:
    """Projection of one curve to a non-annular subsurface.

    curves lists the distinct essential classes (closed components of
    the source inside the region plus each arc's surgered classes);
    empty exactly when the source misses the region.  loops lists the
    distinct closed-component classes before the essentiality filter,
    and arcs keeps the per-arc data.
    """

    subsurface: NonAnnularSubsurface
    curves: tuple[NormalCurve, ...]
    loops: tuple[NormalCurve, ...] = ()
    arcs: list[ArcProjection] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.arcs and not self.loops


def project_nonannular(sub: NonAnnularSubsurface, x: NormalCurve) -> ProjectionResult:
    """Project a curve to a complementary region of the defining system."""
    require_same_triangulation(sub.system, x)
    ov = minimized_overlay(sub.system, x)
    rc = RegionComplex(ov, cutting_layers=(0,))
    target = rc.regions[sub.locate(rc)]
    dart_circuit: dict[int, int] = {}
    for fi, circ in enumerate(target.circuits):
        for d in circ.darts:
            dart_circuit[d] = fi

    arcs, loops = passive_parts(rc, 1)
    out: dict[tuple[int, ...], NormalCurve] = {}
    loop_classes: dict[tuple[int, ...], NormalCurve] = {}
    for loop in loops:
        if loop.region != target.index:
            continue
        c = NormalCurve(x.tri, loop.coords)
        loop_classes.setdefault(c.coords, c)
        if c.coords not in sub.boundary_classes:
            out.setdefault(c.coords, c)

    arc_projections: list[ArcProjection] = []
    chords = ov.chords()
    for arc in arcs:
        if arc.region != target.index:
            continue
        cut = RegionComplex(ov, cutting_layers=(0,), extra_pieces=arc.pieces)
        piece_set = set(arc.pieces)
        feet: set[int] = set()
        produced: dict[tuple[int, ...], NormalCurve] = {}
        for region in cut.regions:
            for circ in region.circuits:
                if not piece_set.intersection(circ.pieces):
                    continue
                for d, piece in zip(circ.darts, circ.pieces):
                    if chords[piece[0]].layer == 0:
                        feet.add(dart_circuit[d])
                c = circ.curve
                if c is None or not is_essential(c):
                    continue
                if c.coords in sub.boundary_classes:
                    continue
                produced.setdefault(c.coords, c)
        if not feet:
            raise InvalidParamsError("arc surgery found no region boundary")
        arc_projections.append(
            ArcProjection(
                pieces=arc.pieces,
                feet=frozenset(feet),
                curves=tuple(produced[k] for k in sorted(produced)),
            )
        )
        for k, c in produced.items():
            out.setdefault(k, c)

    return ProjectionResult(
        subsurface=sub,
        curves=tuple(out[k] for k in sorted(out)),
        loops=tuple(loop_classes[k] for k in sorted(loop_classes)),
        arcs=arc_projections,
    )


def curves_in_subsurface(
    sub: NonAnnularSubsurface, bound: int
) -> list[NormalCurve]:
    """Ambient curves of coordinate size <= bound that lie in the region
    and are essential there."""
    tri = sub.system.tri
    found = []
    for c in enumerate_curves(tri, bound):
        if nintersect(c, sub.system) != 0:
            continue
        if c.coords in sub.boundary_classes:
            continue
        ov = minimized_overlay(sub.system, c)
        rc = RegionComplex(ov, cutting_layers=(0,))
        loops = passive_parts(rc, 1)[1]
        if loops and loops[0].region == sub.locate(rc):
            found.append(c)
    return found


# ---------------------------------------------------------------------------
# slope chart of a Farey-type region


@dataclass
class _SlopeChart:
    """Basis triple identifying the region's curve set with the Farey graph.

    The triple plays 1/0, 0/1 and 1/1; a curve's denominator, numerator
    and their difference are its intersection numbers with the triple
    divided by the step size (one crossing per step on a handle, two on
    a four-ended region).  The sign of the numerator is pinned by the
    third intersection; flipping the choice of 1/1 mirrors the chart,
    which no graph distance can see.
    """

    step: int
    basis: tuple[NormalCurve, NormalCurve, NormalCurve]

    def slope_of(self, c: NormalCurve) -> Slope:
        triple = []
        for e in self.basis:
            n = nintersect(c, e)
            if n % self.step:
                raise InvalidParamsError(
                    f"intersection {n} not a multiple of the step {self.step}"
                )
            triple.append(n // self.step)
        q, pa, m = triple
        if q == 0:
            return Slope(1, 0)
        for p in (pa, -pa):
            if abs(p - q) == m:
                return Slope.make(p, q)
        raise InvalidParamsError(f"triple {triple} matches no slope")


_CHART_BOUNDS = (2, 3, 4, 6)


def _slope_chart(sub: NonAnnularSubsurface) -> _SlopeChart:
    if sub._chart is not None:
        return sub._chart
    if complexity(sub.sig) != 1:
        raise UnsupportedSignatureError(
            f"no slope chart on a region of type {sub.sig}"
        )
    step = 1 if sub.sig.genus == 1 else 2
    for bound in _CHART_BOUNDS:
        pool = curves_in_subsurface(sub, bound)
        for e_inf in pool:
            e0 = next(
                (c for c in pool if nintersect(c, e_inf) == step), None
            )
            if e0 is None:
                continue
            e1 = next(
                (
                    c
                    for c in pool
                    if nintersect(c, e_inf) == step
                    and nintersect(c, e0) == step
                ),
                None,
            )
            if e1 is None:
                continue
            sub._chart = _SlopeChart(step=step, basis=(e_inf, e0, e1))
            return sub._chart
    raise InvalidSubsurfaceError(
        f"no basis triple of curves found in the region up to bound "
        f"{_CHART_BOUNDS[-1]}"
    )


def region_slopes(
    sub: NonAnnularSubsurface, curves: Iterable[NormalCurve]
) -> list[Slope]:
    """Slopes of curves lying in the region, under its chart."""
    chart = _slope_chart(sub)
    return [chart.slope_of(c) for c in curves]


# ---------------------------------------------------------------------------
# annular twisting


def annular_projects(core: NormalCurve, x: NormalCurve) -> bool:
    return nintersect(core, x) > 0


def relative_twist(core: NormalCurve, u: NormalCurve, v: NormalCurve) -> int:
    """Twist power along the core that brings u closest to v.

    Returns an n minimizing i(T^n u, v), smallest |n| on ties.  The
    intersection falls linearly toward the minimum and rises linearly
    after it, so a doubling descent followed by a short verification
    scan around the stopping point finds the minimum; on twist families
    the minimum value is zero and the answer is exact.
    """
    if nintersect(core, u) == 0 or nintersect(core, v) == 0:
        raise EmptyProjectionError("curve misses the annulus")
    vals: dict[int, int] = {}

    def f(n: int) -> int:
        if n not in vals:
            vals[n] = nintersect(dehn_twist_curve(core, u, n), v)
        return vals[n]

    def better(a: int, b: int) -> bool:
        return (f(a), abs(a), a) < (f(b), abs(b), b)

    n = 0
    rounds = 0
    while True:
        rounds += 1
        if rounds > 4096:
            raise BudgetExceededError("twisting descent did not converge")
        step = 1
        moved = False
        while step <= 8 and not moved:
            for cand in (n - step, n + step):
                if better(cand, n):
                    n = cand
                    moved = True
                    break
            step *= 2
        if not moved:
            return n


def _annular_pair_distance(
    core: NormalCurve, u: NormalCurve, v: NormalCurve
) -> int:
    if u.coords == v.coords:
        return 0 if nintersect(u, core) <= 1 else 1
    return abs(relative_twist(core, u, v)) + 2


def annular_slack(sig: SurfaceSig) -> int:
    """Declared uncertainty of annular distances on this ambient surface."""
    return 0 if complexity(sig) == 1 else 2


# ---------------------------------------------------------------------------
# distances


def _as_curves(side: NormalCurve | Sequence[NormalCurve]) -> tuple[NormalCurve, ...]:
    if isinstance(side, NormalCurve):
        return (side,)
    out = tuple(side)
    if not out:
        raise InvalidParamsError("empty curve collection")
    return out


def subsurface_distance(
    sub: Subsurface,
    a: NormalCurve | Sequence[NormalCurve],
    b: NormalCurve | Sequence[NormalCurve],
) -> int:
    """Diameter of the two projections inside the subsurface's curve graph.

    Exact for non-annular targets and for annuli in the once-punctured
    torus and four-punctured sphere; annuli in the larger two surfaces
    use the twisting surrogate, accurate to within annular_slack of the
    ambient signature.
    """
    ca, cb = _as_curves(a), _as_curves(b)
    if isinstance(sub, AnnularSubsurface):
        return _annular_diameter(sub, ca, cb)
    pa = _side_projection(sub, ca)
    pb = _side_projection(sub, cb)
    chart = _slope_chart(sub)
    slopes = {chart.slope_of(c) for c in pa + pb}
    pool = sorted(slopes, key=lambda s: (s.q, s.p))
    return max(
        (
            graph_distance(s, t)
            for i, s in enumerate(pool)
            for t in pool[i + 1 :]
        ),
        default=0,
    )


def _side_projection(
    sub: NonAnnularSubsurface, side: tuple[NormalCurve, ...]
) -> tuple[NormalCurve, ...]:
    out: dict[tuple[int, ...], NormalCurve] = {}
    for c in side:
        for p in project_nonannular(sub, c).curves:
            out.setdefault(p.coords, p)
    if not out:
        raise EmptyProjectionError("side misses the subsurface")
    return tuple(out[k] for k in sorted(out))


def _annular_diameter(
    sub: AnnularSubsurface,
    ca: tuple[NormalCurve, ...],
    cb: tuple[NormalCurve, ...],
) -> int:
    core = sub.core
    sides = []
    for side in (ca, cb):
        kept = [c for c in side if annular_projects(core, c)]
        if not kept:
            raise EmptyProjectionError("side misses the annulus")
        sides.append(kept)
    pool: dict[tuple[int, ...], NormalCurve] = {}
    for c in sides[0] + sides[1]:
        pool.setdefault(c.coords, c)
    curves = [pool[k] for k in sorted(pool)]
    if complexity(sub.ambient) == 1:
        core_s = curve_slope(core)
        slopes = [curve_slope(c) for c in curves]
        surf = farey_surface(sub.ambient)
        return max(
            (
                farey_annular_distance(core_s, s, t, surf)
                for i, s in enumerate(slopes)
                for t in slopes[i:]
            ),
            default=0,
        )
    return max(
        (
            _annular_pair_distance(core, s, t)
            for i, s in enumerate(curves)
            for t in curves[i:]
        ),
        default=0,
    )


# ---------------------------------------------------------------------------
# data-level checks


def check_lemma_kp(
    instances: Iterable[tuple[NonAnnularSubsurface, NormalCurve]]
) -> CheckReport:
    """Class counts of curve-region intersections stay within the ambient
    Euler bound: at most 3|chi| intersection classes, 6|chi| projected."""
    checked = 0
    failures: list[str] = []
    for sub, x in instances:
        checked += 1
        chi = abs(euler_characteristic(sub.ambient))
        pr = project_nonannular(sub, x)
        arc_classes = {(a.feet, tuple(c.coords for c in a.curves)) for a in pr.arcs}
        pieces = len(arc_classes) + len(pr.loops)
        ok = pieces <= 3 * chi and len(pr.curves) <= 6 * chi
        if not ok and len(failures) < 20:
            failures.append(
                f"x={x.coords} in {sub.descriptor}: {pieces} classes, "
                f"{len(pr.curves)} projected vs chi={chi}"
            )
    return CheckReport("intersection-class-counts", not failures, checked, failures)


def check_lemma_oct(
    instances: Iterable[tuple[NormalCurve, NormalCurve, Subsurface]]
) -> CheckReport:
    """Disjoint curves project at distance at most 3 to every subsurface
    both meet (up to the declared annular slack)."""
    checked = 0
    skipped = 0
    failures: list[str] = []
    for x, y, sub in instances:
        if nintersect(x, y) != 0 or x.coords == y.coords:
            raise InvalidParamsError("instance curves are not disjoint")
        try:
            d = subsurface_distance(sub, x, y)
        except EmptyProjectionError:
            skipped += 1
            continue
        checked += 1
        slack = (
            annular_slack(sub.ambient)
            if isinstance(sub, AnnularSubsurface)
            else 0
        )
        if d > 3 + slack and len(failures) < 20:
            failures.append(
                f"d_Z({x.coords},{y.coords}) = {d} > 3 + {slack}"
            )
    return CheckReport(
        "disjoint-pair-projection-bound",
        not failures,
        checked,
        failures,
        note=f"{skipped} instances missed the subsurface",
    )


def check_lemma_i(
    instances: Iterable[tuple[NonAnnularSubsurface, NormalCurve, NormalCurve]]
) -> CheckReport:
    """Arc surgery preserves intersection with curves in the region.

    Instances are (region, x, y) with x a curve in the region and y a
    transversal meeting the region in exactly one arc, so that every
    crossing of x and y happens along that arc.  An arc with feet on two
    distinct boundary circuits projects to one class met exactly twice
    per crossing; an arc with both feet on one circuit has some class
    met once per crossing; the projection never drops crossings.
    """
    checked = 0
    failures: list[str] = []
    for sub, x, y in instances:
        checked += 1
        if nintersect(x, sub.system) != 0:
            raise InvalidParamsError("x is not contained in the region")
        pr = project_nonannular(sub, y)
        in_region = [a for a in pr.arcs]
        if len(in_region) != 1 or pr.loops:
            raise InvalidParamsError(
                "instance does not meet the region in exactly one arc"
            )
        arc = in_region[0]
        ixy = nintersect(x, y)
        hits = [nintersect(x, c) for c in arc.curves]
        problems = []
        if not arc.curves:
            problems.append("empty surgery")
        elif len(arc.feet) == 2:
            if len(arc.curves) != 1:
                problems.append(f"{len(arc.curves)} classes from a spanning arc")
            elif hits[0] != 2 * ixy:
                problems.append(f"i(x, pi) = {hits[0]} != 2*{ixy}")
        else:
            if ixy not in hits:
                problems.append(f"no class with i(x, .) = {ixy} in {hits}")
        if sum(hits) < ixy:
            problems.append(f"sum {sum(hits)} < i(x, y) = {ixy}")
        if problems and len(failures) < 20:
            failures.append(
                f"x={x.coords} y={y.coords}: " + "; ".join(problems)
            )
    return CheckReport("arc-surgery-intersections", not failures, checked, failures)
