"""Distance-certificate and tight-multigeodesic tests.

The independent oracles here avoid the code paths they audit: slope
distances come from the continued-fraction dictionary, absence of short
paths is re-checked by brute enumeration over small coordinate pools,
and the witness paths are re-verified edge by edge with the raw
intersection routine.
"""

import itertools
import math
import random

import pytest

from curvekit import search
from curvekit.arrangement import dehn_twist_curve, nintersect
from curvekit.bounds import constants_for
from curvekit.core import S05, S11, S12
from curvekit.errors import (
    BudgetExceededError,
    InvalidParamsError,
    NotApplicableError,
)
from curvekit.farey import Slope, graph_distance, is_adjacent
from curvekit.projections import (
    AnnularSubsurface,
    check_lemma_oct,
    subsurfaces_of,
)
from curvekit.regions import boundary_of_filling, fills
from curvekit.search import (
    DistanceCertificate,
    SearchConfig,
    TightMultigeodesic,
    check_interior_projection_bound,
    check_intersection_decay,
    distance,
    enumerate_tight_multigeodesics,
    is_tight,
)
from curvekit.surfaces import (
    curve_slope,
    enumerate_curves,
    slope_curve,
    triangulation_for,
)


@pytest.fixture(scope="module")
def pools():
    out = {}
    for sig in (S05, S12):
        out[sig] = list(enumerate_curves(triangulation_for(sig), 2))
    return out


def classified_pair(pool, kind):
    x = pool[0]
    for c in pool:
        if c.coords == x.coords:
            continue
        i = nintersect(x, c)
        if kind == "disjoint" and i == 0:
            return x, c
        if kind == "crossing" and i > 0 and not fills(x, c):
            return x, c
        if kind == "filling" and i > 0 and fills(x, c):
            return x, c
    raise AssertionError(f"no {kind} pair in pool")


def path_is_valid(witness):
    return all(
        a.coords != b.coords and nintersect(a, b) == 0
        for a, b in zip(witness, witness[1:])
    )


# distance certificates


def test_distance_matches_slope_dictionary():
    rng = random.Random(20260814)
    surfpool = [
        Slope.make(p, q)
        for q in range(1, 13)
        for p in range(-12, 13)
        if math.gcd(p, q) == 1
    ]
    for _ in range(500):
        sx, sy = rng.sample(surfpool, 2)
        x = slope_curve(S11, sx)
        y = slope_curve(S11, sy)
        cert = distance(x, y)
        assert cert.exhaustive
        assert cert.distance == graph_distance(sx, sy)


def test_slope_witness_is_a_geodesic():
    rng = random.Random(7)
    pool = [
        Slope.make(p, q)
        for q in range(1, 9)
        for p in range(0, 9)
        if math.gcd(p, q) == 1
    ]
    for _ in range(50):
        sx, sy = rng.sample(pool, 2)
        cert = distance(slope_curve(S11, sx), slope_curve(S11, sy))
        w = [curve_slope(c) for c in cert.witness]
        assert len(w) == cert.distance + 1
        assert w[0] == sx and w[-1] == sy
        assert all(is_adjacent(a, b) for a, b in zip(w, w[1:]))


@pytest.mark.parametrize("sig", [S05, S12])
def test_classification_certificates(pools, sig):
    pool = pools[sig]
    x, d1 = classified_pair(pool, "disjoint")
    cert0 = distance(x, x)
    assert cert0.distance == 0 and cert0.witness == (x,)
    cert1 = distance(x, d1)
    assert cert1.distance == 1 and path_is_valid(cert1.witness)
    x2, d2 = classified_pair(pool, "crossing")
    cert2 = distance(x2, d2)
    assert cert2.distance == 2
    assert path_is_valid(cert2.witness)
    mid = cert2.witness[1]
    assert mid.coords in {c.coords for c in boundary_of_filling(x2, d2)}


@pytest.mark.parametrize("sig", [S05, S12])
def test_distance_three_certificate(pools, sig):
    x, y = classified_pair(pools[sig], "filling")
    cert = distance(x, y)
    assert cert.exhaustive and cert.distance == 3
    assert cert.method == "witness-scan"
    assert path_is_valid(cert.witness)
    assert len(cert.levels) == 2
    lin = constants_for(sig).linear_log2
    i = nintersect(x, y)
    for level in cert.levels:
        assert level.log2_bound == level.index * lin + math.log2(i)


@pytest.mark.parametrize("sig", [S05, S12])
def test_no_shorter_path_by_brute_enumeration(pools, sig):
    # independent shallow re-check of a distance-3 certificate: no
    # single curve under the scan cap is disjoint from both endpoints
    x, y = classified_pair(pools[sig], "filling")
    cert = distance(x, y)
    assert cert.distance == 3
    cap = SearchConfig().effective_cap(x, y)
    for c in enumerate_curves(x.tri, min(cap, 3)):
        assert nintersect(c, x) > 0 or nintersect(c, y) > 0


def test_fills_iff_distance_at_least_three(pools):
    pool = pools[S05]
    rng = random.Random(20260814)
    for _ in range(200):
        x, y = rng.sample(pool, 2)
        cert = distance(x, y)
        assert (cert.lower >= 3) == fills(x, y)


def test_interval_certificate_is_honest(pools):
    pool = pools[S05]
    x, f = classified_pair(pool, "filling")
    tw = dehn_twist_curve(f, x, 3)
    assert fills(tw, x)
    cert = distance(tw, x, SearchConfig(cap=2))
    assert not cert.exhaustive
    assert cert.lower == 3
    i = nintersect(tw, x)
    assert cert.upper == (i * i).bit_length() - 1 + 2
    assert cert.witness is None
    with pytest.raises(NotApplicableError):
        cert.distance
    text = cert.text()
    assert f"distance: 3..{cert.upper}" in text
    assert "exhaustive: false" in text
    assert len(cert.levels) == cert.upper - 1


def test_certificate_text_format(pools):
    x, y = classified_pair(pools[S05], "filling")
    text = distance(x, y).text()
    lines = text.strip().splitlines()
    assert lines[0] == "distance: 3"
    assert lines[1] == "exhaustive: true"
    assert lines[2] == "geodesic:"
    assert lines[3] == " ".join(str(w) for w in x.coords)
    assert lines[7] == "bounds:"
    assert lines[8].startswith("level 1 theorem ") and lines[8].endswith(
        " effective 8"
    )


def test_distance_rejects_bad_input(pools):
    pool = pools[S05]
    x, d1 = classified_pair(pool, "disjoint")
    two = x.coords
    joined = tuple(a + b for a, b in zip(two, d1.coords))
    from curvekit.surfaces import make_curve

    with pytest.raises(InvalidParamsError):
        distance(make_curve(x.tri, joined), x)
    xf, yf = classified_pair(pool, "filling")
    with pytest.raises(InvalidParamsError):
        distance(xf, yf, SearchConfig(cap=0))


# tight multigeodesics


@pytest.mark.parametrize("sig", [S05, S12])
def test_enumerate_distance2_unique(pools, sig):
    x, y = classified_pair(pools[sig], "crossing")
    out = enumerate_tight_multigeodesics(x, y)
    assert len(out) == 1
    t = out[0]
    assert t.tight and is_tight(t)
    assert {c.coords for c in t.vertices[1]} == {
        c.coords for c in boundary_of_filling(x, y)
    }


@pytest.mark.parametrize("sig", [S05, S12])
def test_enumerate_distance3_nonempty_verified_deterministic(pools, sig):
    x, y = classified_pair(pools[sig], "filling")
    out = enumerate_tight_multigeodesics(x, y)
    assert out
    keys = [t.key() for t in out]
    assert len(set(keys)) == len(keys)
    assert all(is_tight(t) for t in out)
    assert all(t.start.coords == x.coords and t.end.coords == y.coords for t in out)
    again = enumerate_tight_multigeodesics(x, y)
    assert [t.key() for t in again] == keys


def test_enumerate_trivial_cases(pools):
    pool = pools[S05]
    x, d1 = classified_pair(pool, "disjoint")
    out0 = enumerate_tight_multigeodesics(x, x)
    assert len(out0) == 1 and out0[0].length == 0
    out1 = enumerate_tight_multigeodesics(x, d1)
    assert len(out1) == 1 and out1[0].length == 1 and is_tight(out1[0])


def test_enumerate_slope_geodesics_tight_by_convention():
    x = slope_curve(S11, Slope.make(0, 1))
    y = slope_curve(S11, Slope.make(5, 3))
    out = enumerate_tight_multigeodesics(x, y, dmax=4)
    assert out and all(is_tight(t) for t in out)
    assert all(all(len(lvl) == 1 for lvl in t.vertices) for t in out)
    with pytest.raises(InvalidParamsError):
        enumerate_tight_multigeodesics(x, y, dmax=1)


def test_enumerate_refuses_bracketed_distance(pools):
    pool = pools[S05]
    x, f = classified_pair(pool, "filling")
    tw = dehn_twist_curve(f, x, 3)
    with pytest.raises(BudgetExceededError):
        enumerate_tight_multigeodesics(tw, x, config=SearchConfig(cap=2))
    with pytest.raises(InvalidParamsError):
        enumerate_tight_multigeodesics(x, f, dmax=5)


def test_is_tight_rejects_broken_levels(pools):
    pool = pools[S05]
    x, y = classified_pair(pool, "crossing")
    good = enumerate_tight_multigeodesics(x, y)[0]
    assert is_tight(good)
    # repeated curve one level apart breaks the distance condition
    assert not is_tight(((x,), (x,)))
    # walk returning to its start is not a multigeodesic
    _, d1 = classified_pair(pool, "disjoint")
    assert not is_tight(((x,), (d1,), (x,)))
    # crossing curves cannot share a level
    assert not is_tight(((x,), (y,)))


def brute_quadruples(pool, x, y):
    out = set()
    for w1 in pool:
        if w1.coords == x.coords or nintersect(x, w1) != 0:
            continue
        if nintersect(w1, y) == 0 or fills(w1, y):
            continue
        for w2 in pool:
            if w2.coords == w1.coords or nintersect(w1, w2) != 0:
                continue
            if w2.coords == y.coords or nintersect(w2, y) != 0:
                continue
            if nintersect(x, w2) == 0 or fills(x, w2):
                continue
            out.add(((x.coords,), (w1.coords,), (w2.coords,), (y.coords,)))
    return out


@pytest.mark.parametrize("sig", [S05, S12])
def test_enumeration_agrees_with_brute_multigeodesic_scan(pools, sig):
    # every single-curve-level multigeodesic found by a raw cubic scan
    # must appear in the enumeration; on the five-punctured sphere the
    # two sets coincide at this scale, all four quadruples being tight
    x, y = classified_pair(pools[sig], "filling")
    pool3 = list(enumerate_curves(x.tri, 3))
    brute = brute_quadruples(pool3, x, y)
    tight_keys = {t.key() for t in enumerate_tight_multigeodesics(x, y)}
    assert brute <= tight_keys
    if sig == S05:
        assert len(brute) == 4 and brute == tight_keys


# checks on the corpus


def corpus(pools):
    out = []
    for sig in (S05, S12):
        for kind in ("crossing", "filling"):
            x, y = classified_pair(pools[sig], kind)
            out.extend(enumerate_tight_multigeodesics(x, y))
    return out


def test_consecutive_levels_satisfy_disjoint_projection_bound(pools):
    instances = []
    for t in corpus(pools):
        tri = t.start.tri
        zs = [AnnularSubsurface(c) for c in itertools.islice(
            enumerate_curves(tri, 1), 6
        )]
        for lvl, nxt in zip(t.vertices, t.vertices[1:]):
            for a in lvl:
                for b in nxt:
                    for z in zs:
                        instances.append((a, b, z))
    report = check_lemma_oct(instances)
    assert report.passed
    assert report.checked > 0


def test_interior_projection_bound_over_corpus(pools):
    applicable = 0
    for t in corpus(pools):
        if t.length < 2:
            continue
        subs = [AnnularSubsurface(t.start), AnnularSubsurface(t.end)]
        subs += [
            AnnularSubsurface(c)
            for c in itertools.islice(enumerate_curves(t.start.tri, 1), 4)
        ]
        for lvl in t.vertices[1:-1]:
            subs.extend(subsurfaces_of(lvl[0]))
        for sub in subs:
            try:
                report = check_interior_projection_bound(t, sub)
            except NotApplicableError:
                continue
            applicable += 1
            assert report.passed, report.failures
    assert applicable > 0


def test_intersection_decay_over_corpus(pools):
    for t in corpus(pools):
        report = check_intersection_decay(t)
        assert report.passed, report.failures
        assert report.checked == t.length


def test_intersection_decay_sharp_on_slopes():
    rng = random.Random(11)
    pool = [
        Slope.make(p, q)
        for q in range(1, 9)
        for p in range(0, 9)
        if math.gcd(p, q) == 1
    ]
    total = 0
    for _ in range(30):
        sx, sy = rng.sample(pool, 2)
        if graph_distance(sx, sy) > 4:
            continue
        x = slope_curve(S11, sx)
        y = slope_curve(S11, sy)
        for t in enumerate_tight_multigeodesics(x, y, dmax=4):
            report = check_intersection_decay(t)
            assert report.passed, report.failures
            total += 1
    assert total > 10


def test_decay_levels_record_linear_factor(pools):
    x, y = classified_pair(pools[S05], "filling")
    cert = distance(x, y)
    lin = constants_for(S05).linear_log2
    i = nintersect(x, y)
    for level in cert.levels:
        assert level.log2_bound == level.index * lin + math.log2(i)
        assert level.effective == 8
