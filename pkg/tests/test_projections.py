"""Subsurface projections: charts, arc surgery, distances, count bounds.

The slope chart of a complexity-one region is validated by transporting
every intersection number to the Farey model, so region distances
inherit the exactness of the slope engine.  Arc surgery is pinned on
hand-checked cases and swept through the three counting and adjacency
bounds on seeded corpora.
"""

from __future__ import annotations

import random

import pytest

from curvekit.arrangement import dehn_twist_curve, nintersect
from curvekit.core import S04, S05, S11, S12
from curvekit.errors import (
    EmptyProjectionError,
    InvalidParamsError,
    InvalidSubsurfaceError,
)
from curvekit.farey import SPHERE4, TORUS, Slope, fintersect, graph_distance
from curvekit.farey import annular_distance as farey_annular_distance
from curvekit.projections import (
    AnnularSubsurface,
    NonAnnularSubsurface,
    check_lemma_i,
    check_lemma_kp,
    check_lemma_oct,
    curves_in_subsurface,
    project_nonannular,
    region_slopes,
    relative_twist,
    subsurface_distance,
    subsurfaces_of,
    _slope_chart,
)
from curvekit.surfaces import (
    curve_slope,
    enumerate_curves,
    slope_curve,
    triangulation_for,
)


def curves_for(sig, bound=2):
    return list(enumerate_curves(triangulation_for(sig), bound))


@pytest.fixture(scope="module")
def s05_curves():
    return curves_for(S05)


@pytest.fixture(scope="module")
def s12_curves():
    return curves_for(S12)


def first_subsurface(curves):
    for z in curves:
        subs = subsurfaces_of(z)
        if subs:
            return subs[0]
    raise AssertionError("no region with curves found")


# ---------------------------------------------------------------------------
# subsurface identification


def test_separating_complement_has_one_farey_region(s05_curves):
    z = s05_curves[0]
    subs = subsurfaces_of(z)
    assert len(subs) == 1
    sub = subs[0]
    assert sub.sig.genus == 0
    assert sub.sig.punctures == 4  # three punctures plus the boundary end
    assert sub.boundary_classes == {z.coords}


def test_nonseparating_complement_is_four_ended(s12_curves):
    z = next(c for c in s12_curves if subsurfaces_of(c))
    sub = subsurfaces_of(z)[0]
    assert sub.sig.genus == 0
    assert sub.sig.punctures == 4
    # both sides of the cut are parallel to the same ambient class
    assert sub.boundary_classes == {z.coords}


def test_low_complexity_regions_rejected(s05_curves):
    z = s05_curves[0]
    # the other side of a separating curve on the sphere is a pair of
    # pants and carries no curves
    with pytest.raises(InvalidSubsurfaceError):
        NonAnnularSubsurface(z, 1 - subsurfaces_of(z)[0].selector)
    with pytest.raises(InvalidSubsurfaceError):
        NonAnnularSubsurface(z, 5)


# ---------------------------------------------------------------------------
# slope charts


@pytest.mark.parametrize("sig", [S05, S12])
def test_chart_transports_intersections_to_farey(sig):
    curves = curves_for(sig)
    sub = first_subsurface(curves)
    chart = _slope_chart(sub)
    assert chart.step == 2  # four-ended regions cross in pairs
    inside = curves_in_subsurface(sub, 4)
    assert len(inside) >= 6
    slopes = region_slopes(sub, inside)
    model = SPHERE4 if chart.step == 2 else TORUS
    for i, c1 in enumerate(inside):
        for j in range(i, len(inside)):
            assert nintersect(c1, inside[j]) == fintersect(
                slopes[i], slopes[j], model
            )


def test_chart_basis_maps_to_standard_triple(s05_curves):
    sub = first_subsurface(s05_curves)
    chart = _slope_chart(sub)
    assert [chart.slope_of(b) for b in chart.basis] == [
        Slope(1, 0),
        Slope(0, 1),
        Slope(1, 1),
    ]


def test_region_distance_matches_chart_distance(s05_curves):
    sub = first_subsurface(s05_curves)
    inside = curves_in_subsurface(sub, 4)
    chart = _slope_chart(sub)
    rng = random.Random(905)
    for _ in range(25):
        a, b = rng.sample(inside, 2)
        assert subsurface_distance(sub, a, b) == graph_distance(
            chart.slope_of(a), chart.slope_of(b)
        )


# ---------------------------------------------------------------------------
# arc surgery


def test_spanning_arcs_project_to_one_class(s12_curves):
    z = next(c for c in s12_curves if subsurfaces_of(c))
    sub = subsurfaces_of(z)[0]
    seen = 0
    for y in s12_curves:
        if nintersect(y, z) == 0:
            continue
        for arc in project_nonannular(sub, y).arcs:
            if len(arc.feet) == 2:
                seen += 1
                assert len(arc.curves) == 1
            else:
                assert 1 <= len(arc.curves) <= 2
    assert seen > 0


def test_projection_disjoint_from_region_boundary(s05_curves):
    sub = first_subsurface(s05_curves)
    z = sub.system
    for y in s05_curves[:12]:
        if nintersect(y, z) == 0:
            continue
        for c in project_nonannular(sub, y).curves:
            assert nintersect(c, z) == 0
            assert c.coords not in sub.boundary_classes


def test_curve_inside_region_projects_to_itself(s05_curves):
    sub = first_subsurface(s05_curves)
    for x in curves_in_subsurface(sub, 3)[:6]:
        pr = project_nonannular(sub, x)
        assert [c.coords for c in pr.curves] == [x.coords]
        assert not pr.arcs


def test_missing_curve_projects_to_nothing(s05_curves):
    z = s05_curves[0]
    sub = subsurfaces_of(z)[0]
    pr = project_nonannular(sub, z)
    assert pr.is_empty()
    assert pr.curves == ()
    with pytest.raises(EmptyProjectionError):
        subsurface_distance(sub, z, z)


def test_boundary_twist_naturality(s05_curves, s12_curves):
    # twisting along the defining system is supported off the region and
    # cannot move the projection
    for curves in (s05_curves, s12_curves):
        sub = first_subsurface(curves)
        z = sub.system
        moved = 0
        for y in curves[:10]:
            if nintersect(y, z) == 0:
                continue
            base = {c.coords for c in project_nonannular(sub, y).curves}
            for n in (1, -2):
                yn = dehn_twist_curve(z, y, n)
                assert {
                    c.coords for c in project_nonannular(sub, yn).curves
                } == base
                moved += 1
        assert moved > 0


# ---------------------------------------------------------------------------
# annular distances


@pytest.mark.parametrize("sig", [S05, S12])
def test_twisting_surrogate_exact_on_twist_families(sig):
    curves = curves_for(sig)
    rng = random.Random(180 + sig.punctures)
    for _ in range(25):
        core = rng.choice(curves)
        u = rng.choice([c for c in curves if nintersect(c, core) > 0])
        n = rng.choice([k for k in range(-8, 9) if k])
        v = dehn_twist_curve(core, u, n)
        assert relative_twist(core, u, v) == n
        assert subsurface_distance(AnnularSubsurface(core), u, v) == abs(n) + 2


def test_annulus_on_slope_surface_delegates_exactly():
    for sig, surf in ((S11, TORUS), (S04, SPHERE4)):
        core, u, v = (
            slope_curve(sig, Slope(0, 1)),
            slope_curve(sig, Slope(1, 0)),
            slope_curve(sig, Slope(5, 1)),
        )
        got = subsurface_distance(AnnularSubsurface(core), u, v)
        assert got == farey_annular_distance(
            Slope(0, 1), Slope(1, 0), Slope(5, 1), surf
        )


def test_annulus_requires_crossing(s05_curves):
    core = s05_curves[0]
    other = next(c for c in s05_curves if nintersect(c, core) == 0)
    with pytest.raises(EmptyProjectionError):
        subsurface_distance(AnnularSubsurface(core), other, s05_curves[3])


# ---------------------------------------------------------------------------
# counting and adjacency sweeps


@pytest.mark.parametrize("sig", [S05, S12])
def test_intersection_class_counts_sweep(sig):
    curves = curves_for(sig)
    rng = random.Random(300 + sig.punctures)
    subs = [s for c in curves for s in subsurfaces_of(c)]
    instances = []
    while len(instances) < 100:
        sub = rng.choice(subs)
        x = rng.choice(curves)
        if rng.random() < 0.5:
            core = rng.choice(curves)
            n = rng.randint(1, 4)
            if nintersect(core, x):
                x = dehn_twist_curve(core, x, n)
        instances.append((sub, x))
    report = check_lemma_kp(instances)
    assert report.passed, report.failures


@pytest.mark.parametrize("sig", [S05, S12])
def test_disjoint_pairs_project_close_sweep(sig):
    curves = curves_for(sig)
    rng = random.Random(310 + sig.punctures)
    pairs = [
        (a, b)
        for i, a in enumerate(curves)
        for b in curves[i + 1 :]
        if nintersect(a, b) == 0
    ]
    subs = [s for c in curves for s in subsurfaces_of(c)]
    instances = []
    while len(instances) < 200:
        a, b = rng.choice(pairs)
        if rng.random() < 0.5:
            sub = rng.choice(subs)
        else:
            sub = AnnularSubsurface(rng.choice(curves))
        instances.append((a, b, sub))
    report = check_lemma_oct(instances)
    assert report.passed, report.failures
    assert report.checked >= 100


def single_arc_instances(sig, count, seed):
    curves = curves_for(sig)
    rng = random.Random(seed)
    out = []
    cache = {}
    systems = [c for c in curves if subsurfaces_of(c)]
    while len(out) < count:
        z = rng.choice(systems)
        if z.coords not in cache:
            sub = subsurfaces_of(z)[0]
            ys = []
            for y in curves:
                if nintersect(y, z) not in (1, 2):
                    continue
                pr = project_nonannular(sub, y)
                if len(pr.arcs) == 1 and not pr.loops:
                    ys.append(y)
            cache[z.coords] = (sub, ys, curves_in_subsurface(sub, 2))
        sub, ys, xs = cache[z.coords]
        if not ys or not xs:
            continue
        out.append((sub, rng.choice(xs), rng.choice(ys)))
    return out


@pytest.mark.parametrize("sig", [S05, S12])
def test_arc_surgery_intersection_sweep(sig):
    report = check_lemma_i(single_arc_instances(sig, 100, 320 + sig.punctures))
    assert report.passed, report.failures
    assert report.checked == 100


def test_lemma_i_rejects_multi_arc_instances(s05_curves):
    z = s05_curves[0]
    sub = subsurfaces_of(z)[0]
    y = next(c for c in s05_curves if nintersect(c, z) >= 4)
    x = curves_in_subsurface(sub, 2)[0]
    with pytest.raises(InvalidParamsError):
        check_lemma_i([(sub, x, y)])


# ---------------------------------------------------------------------------
# slope dictionary round trip


def test_curve_slope_roundtrip():
    from curvekit.farey import grid_slopes

    for sig in (S11, S04):
        for s in grid_slopes(6):
            assert curve_slope(slope_curve(sig, s)) == s


def test_curve_slope_rejects_multicurves():
    from curvekit.surfaces import NormalCurve

    tri = triangulation_for(S11)
    with pytest.raises(InvalidParamsError):
        curve_slope(NormalCurve(tri, (2, 0, 2)))
