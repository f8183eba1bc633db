"""Minimal-position arrangements: exact intersection numbers and twists.

The slope dictionaries give an independent oracle on both one-holed-torus
and four-holed-sphere slopes: two slopes p/q and r/s meet in k|ps - qr|
points.  Every geometric quantity here is checked against that.
"""

from __future__ import annotations

import random

import pytest

from curvekit.arrangement import (
    Overlay,
    dehn_twist_curve,
    minimized_overlay,
    nintersect,
    reduce_word,
    validate_word,
    word_curve,
)
from curvekit.core import S04, S11
from curvekit.errors import InvalidParamsError, TriangulationMismatchError
from curvekit.farey import (
    SPHERE4,
    TORUS,
    Slope,
    dehn_twist,
    fintersect,
    grid_slopes,
)
from curvekit.surfaces import (
    NormalCurve,
    make_curve,
    slope_curve,
    triangulation_for,
)

SURFACES = [(S11, TORUS), (S04, SPHERE4)]


# ---------------------------------------------------------------------------
# intersection numbers against the slope oracle


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_nintersect_matches_slopes_on_grid(sig, surf):
    slopes = grid_slopes(3)
    curves = {s: slope_curve(sig, s) for s in slopes}
    for u in slopes:
        for v in slopes:
            assert nintersect(curves[u], curves[v]) == fintersect(u, v, surf)


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_nintersect_random_large_slopes(sig, surf):
    rng = random.Random(20240 + surf.k)
    for _ in range(30):
        u = Slope.make(rng.randint(-40, 40), rng.randint(1, 40))
        v = Slope.make(rng.randint(-40, 40), rng.randint(1, 40))
        got = nintersect(slope_curve(sig, u), slope_curve(sig, v))
        assert got == fintersect(u, v, surf)


def test_nintersect_heavy_pair_exact():
    a = slope_curve(S11, Slope(89, 55))
    b = slope_curve(S11, Slope(-34, 21))
    assert nintersect(a, b) == fintersect(Slope(89, 55), Slope(-34, 21), TORUS)
    assert nintersect(a, b) == 3739


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_nintersect_symmetric_and_self_zero(sig, surf):
    a = slope_curve(sig, Slope(2, 5))
    b = slope_curve(sig, Slope(-3, 4))
    assert nintersect(a, b) == nintersect(b, a)
    assert nintersect(a, a) == 0


def test_parallel_copies_are_disjoint():
    a = slope_curve(S11, Slope(3, 5))
    tri = a.tri
    doubled = make_curve(tri, tuple(2 * w for w in a.coords), require_connected=False)
    ov = Overlay([doubled, a])
    ov.minimize()
    assert ov.crossing_count() == 0
    assert nintersect(doubled, a) == 0


def test_bigon_removal_drops_two_per_bigon():
    # this pair starts out of minimal position under the naive merge
    a = slope_curve(S04, Slope(-1, 1))
    b = slope_curve(S04, Slope(-3, 2))
    ov = Overlay([a, b])
    assert ov.crossing_count() == 4
    removed = ov.minimize()
    assert removed == 1
    assert ov.crossing_count() == 2
    assert ov.crossing_count() == fintersect(Slope(-1, 1), Slope(-3, 2), SPHERE4)


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_multicurve_additivity(sig, surf):
    a = slope_curve(sig, Slope(1, 3))
    b = slope_curve(sig, Slope(4, 1))
    tri = a.tri
    doubled = make_curve(tri, tuple(2 * w for w in a.coords), require_connected=False)
    assert nintersect(doubled, b) == 2 * nintersect(a, b)
    c = slope_curve(sig, Slope(0, 1))
    if nintersect(a, c) == 0:
        union = make_curve(
            tri,
            tuple(x + y for x, y in zip(a.coords, c.coords)),
            require_connected=False,
        )
        assert nintersect(union, b) == nintersect(a, b) + nintersect(c, b)


def test_minimize_reaches_oracle_count():
    u, v = Slope(5, 8), Slope(-7, 3)
    ov = minimized_overlay(slope_curve(S11, u), slope_curve(S11, v))
    assert ov.crossing_count() == fintersect(u, v, TORUS)


def test_single_layer_overlay_has_no_crossings():
    a = slope_curve(S04, Slope(3, 7))
    ov = Overlay([a])
    assert ov.crossing_count() == 0
    # one closed strand per component, visiting every token once
    (strand,) = ov.itineraries(0)
    tokens = [item for item in strand if item[0] == "token"]
    assert len(tokens) == sum(a.coords)


def test_overlay_input_validation():
    a = slope_curve(S11, Slope(1, 0))
    b = slope_curve(S04, Slope(1, 0))
    with pytest.raises(TriangulationMismatchError):
        Overlay([a, b])
    with pytest.raises(InvalidParamsError):
        Overlay([])
    with pytest.raises(InvalidParamsError):
        Overlay([a, a, a])


# ---------------------------------------------------------------------------
# closed words on the dual graph


def test_word_reduction_and_curve():
    tri = triangulation_for(S11)
    word = [(0, 1, 0), (1, 1, 2)]
    validate_word(tri, word)
    assert reduce_word(tri, word) == word
    curve = word_curve(tri, word)
    assert curve is not None
    assert curve.coords == slope_curve(S11, Slope(1, 1)).coords

    padded = [(0, 1, 0), (1, 1, 1), (0, 0, 0), (1, 1, 2)]
    validate_word(tri, padded)
    assert sorted(reduce_word(tri, padded)) == sorted(word)
    assert word_curve(tri, padded).coords == curve.coords


def test_word_reduces_to_nothing():
    tri = triangulation_for(S11)
    word = [(0, 0, 0), (1, 1, 1)]
    validate_word(tri, word)
    assert reduce_word(tri, word) == []
    assert word_curve(tri, word) is None


def test_word_validation_rejects_broken_gluing():
    tri = triangulation_for(S11)
    with pytest.raises(InvalidParamsError):
        validate_word(tri, [(0, 1, 0), (1, 2, 1)])


# ---------------------------------------------------------------------------
# Dehn twists


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_twist_matches_slope_action(sig, surf):
    cases = [
        (Slope(0, 1), Slope(1, 0), 1),
        (Slope(0, 1), Slope(1, 0), -1),
        (Slope(1, 0), Slope(0, 1), 2),
        (Slope(1, 2), Slope(1, 0), 3),
        (Slope(2, 3), Slope(-1, 2), -2),
        (Slope(1, 1), Slope(0, 1), 5),
    ]
    for c, u, n in cases:
        got = dehn_twist_curve(slope_curve(sig, c), slope_curve(sig, u), n)
        want = dehn_twist(c, u, n * surf.twist_units, surf)
        assert got.coords == slope_curve(sig, want).coords


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_twist_matches_slope_action_random(sig, surf):
    rng = random.Random(4040 + surf.k)
    for _ in range(25):
        c = Slope.make(rng.randint(-6, 6), rng.randint(1, 6))
        u = Slope.make(rng.randint(-6, 6), rng.randint(1, 6))
        n = rng.choice([-3, -2, -1, 1, 2, 3])
        if fintersect(c, u, surf) == 0:
            continue
        got = dehn_twist_curve(slope_curve(sig, c), slope_curve(sig, u), n)
        want = dehn_twist(c, u, n * surf.twist_units, surf)
        assert got.coords == slope_curve(sig, want).coords


@pytest.mark.parametrize("sig,surf", SURFACES)
def test_twist_intersection_growth(sig, surf):
    # a full twist power meets the untwisted curve |n| i(c,u)^2 times
    c = slope_curve(sig, Slope(1, 2))
    u = slope_curve(sig, Slope(1, 0))
    base = nintersect(c, u)
    for n in (-3, -1, 1, 2, 4):
        t = dehn_twist_curve(c, u, n)
        assert nintersect(t, u) == abs(n) * base * base


def test_twist_degenerate_cases():
    c = slope_curve(S11, Slope(2, 3))
    u = slope_curve(S11, Slope(1, 1))
    assert dehn_twist_curve(c, u, 0) is u
    assert dehn_twist_curve(c, c, 4) is c

    # disjoint multicurve target: both copies get twisted
    tri = u.tri
    doubled = make_curve(tri, tuple(2 * w for w in u.coords), require_connected=False)
    td = dehn_twist_curve(c, doubled, 2)
    tu = dehn_twist_curve(c, u, 2)
    assert td.coords == tuple(2 * w for w in tu.coords)


def test_twist_rejects_disconnected_core():
    u = slope_curve(S11, Slope(1, 1))
    tri = u.tri
    doubled = make_curve(tri, tuple(2 * w for w in u.coords), require_connected=False)
    target = slope_curve(S11, Slope(0, 1))
    with pytest.raises(InvalidParamsError):
        dehn_twist_curve(doubled, target, 1)


def test_twist_inverse_roundtrip():
    c = slope_curve(S04, Slope(1, 1))
    u = slope_curve(S04, Slope(1, 0))
    t = dehn_twist_curve(c, u, 3)
    back = dehn_twist_curve(c, t, -3)
    assert back.coords == u.coords
