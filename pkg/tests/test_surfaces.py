"""Triangulation and normal-curve substrate checks.

The slope dictionary doubles as an oracle: on the two complexity-one
surfaces every essential simple closed curve is a slope, so enumeration
counts and component tracing can be compared against explicit slope
lists.
"""

from __future__ import annotations

import random

import pytest

from curvekit.core import S04, S05, S11, S12
from curvekit.errors import InvalidParamsError, TriangulationMismatchError
from curvekit.farey import Slope, grid_slopes
from curvekit.surfaces import (
    NormalCurve,
    components,
    corner_counts,
    enumerate_curves,
    format_curves,
    inessential_components,
    is_admissible,
    is_connected,
    is_essential,
    make_curve,
    parse_curves,
    slope_curve,
    triangulation_for,
    vertex_classes,
    vertex_link_vectors,
)

ALL_SIGS = (S11, S04, S05, S12)


def test_triangulations_glue_and_count_punctures():
    expected_vertices = {S11: 1, S04: 4, S05: 5, S12: 2}
    for sig in ALL_SIGS:
        tri = triangulation_for(sig)
        assert len(tri.triangles) == 2 * abs(2 - 2 * sig.genus - sig.punctures)
        assert len(vertex_classes(tri)) == expected_vertices[sig]


def test_euler_count_of_edges():
    # V - E + F = 2 - 2g for the closed surface underlying each triangulation
    for sig in ALL_SIGS:
        tri = triangulation_for(sig)
        v = len(vertex_classes(tri))
        f = len(tri.triangles)
        assert v - tri.num_edges + f == 2 - 2 * sig.genus


def test_vertex_links_are_admissible_and_inessential():
    for sig in ALL_SIGS:
        tri = triangulation_for(sig)
        links = vertex_link_vectors(tri)
        assert len(links) == sig.punctures
        for w in links:
            assert is_admissible(tri, w)
            curve = NormalCurve(tri, w)
            assert components(curve) == [w]
            assert inessential_components(curve) == [w]
            assert not is_essential(curve)


def test_corner_counts_basics():
    assert corner_counts(0, 0, 0) == (0, 0, 0)
    assert corner_counts(1, 1, 0) == (0, 1, 0)
    assert corner_counts(1, 1, 1) is None
    assert corner_counts(0, 2, 1) is None
    assert corner_counts(5, 3, 2) == (2, 3, 0)


def test_slope_dictionary_s11_basis():
    assert slope_curve(S11, Slope.make(1, 0)).coords == (1, 0, 1)
    assert slope_curve(S11, Slope.make(0, 1)).coords == (0, 1, 1)
    assert slope_curve(S11, Slope.make(1, 1)).coords == (1, 1, 0)


def test_slope_dictionary_s04_basis():
    assert slope_curve(S04, Slope.make(0, 1)).coords == (0, 1, 1, 1, 1, 0)
    assert slope_curve(S04, Slope.make(1, 0)).coords == (1, 0, 1, 1, 0, 1)
    assert slope_curve(S04, Slope.make(1, 1)).coords == (1, 1, 0, 0, 1, 1)


def test_slope_curves_connected_and_essential():
    rng = random.Random(11)
    slopes = grid_slopes(6)
    picks = rng.sample(sorted(slopes, key=str), 25)
    for sig in (S11, S04):
        for s in picks:
            c = slope_curve(sig, s)
            assert is_admissible(c.tri, c.coords), s
            assert is_connected(c), s
            assert is_essential(c), s


def test_doubled_slope_is_two_parallel_components():
    c = slope_curve(S11, Slope.make(2, 5))
    doubled = NormalCurve(c.tri, tuple(2 * w for w in c.coords))
    assert components(doubled) == [c.coords, c.coords]
    assert not is_connected(doubled)


def test_make_curve_validation():
    tri = triangulation_for(S11)
    with pytest.raises(InvalidParamsError):
        make_curve(tri, (1, 1, 1))  # odd triangle sum
    with pytest.raises(InvalidParamsError):
        make_curve(tri, (0, 0, 0))
    with pytest.raises(InvalidParamsError):
        make_curve(tri, (2, 2, 2))  # puncture link on the torus
    with pytest.raises(InvalidParamsError):
        make_curve(tri, (2, 1))
    c = make_curve(tri, (2, 4, 2))  # two parallel copies of 1/2
    assert not is_connected(c)
    with pytest.raises(InvalidParamsError):
        make_curve(tri, (2, 4, 2), require_connected=True)


def test_enumerate_matches_slopes_on_xi_one():
    for sig, k in ((S11, 1), (S04, 2)):
        tri = triangulation_for(sig)
        for bound in (1, 2, 3):
            got = list(enumerate_curves(tri, bound))
            coords = [c.coords for c in got]
            assert coords == sorted(coords)
            assert len(coords) == len(set(coords))
            expect = set()
            for s in grid_slopes(bound + 1):
                c = slope_curve(sig, s)
                if max(c.coords) <= bound:
                    expect.add(c.coords)
            assert set(coords) == expect, (sig, bound)
            for c in got:
                assert is_connected(c) and is_essential(c)


def test_enumerate_s05_smallest_curves():
    tri = triangulation_for(S05)
    got = list(enumerate_curves(tri, 1))
    # genus zero, five punctures: a curve is determined by how it splits the
    # punctures into two and three.  Nine of the ten splits fit with all
    # weights <= 1; the apexes-versus-equator split has to weave across the
    # equator edges twice, so it only shows up at bound 2.
    assert len(got) == 9
    for c in got:
        assert is_connected(c) and is_essential(c)
    bigger = {c.coords for c in enumerate_curves(tri, 2)}
    assert (1, 1, 1, 1, 1, 1, 0, 0, 2) in bigger
    assert len(bigger) == 30


def test_enumerate_s12_has_nonseparating_and_separating():
    tri = triangulation_for(S12)
    got = list(enumerate_curves(tri, 2))
    assert len(got) >= 3
    for c in got:
        assert is_connected(c) and is_essential(c)


def test_curve_file_roundtrip():
    tri = triangulation_for(S04)
    curves = [
        slope_curve(S04, Slope.make(1, 0)),
        slope_curve(S04, Slope.make(3, 2)),
    ]
    text = format_curves(curves)
    assert text.splitlines()[0] == "surface 0 4"
    back = parse_curves(text)
    assert [c.coords for c in back] == [c.coords for c in curves]


def test_curve_file_errors():
    with pytest.raises(InvalidParamsError):
        parse_curves("curve 1 0 1\n")
    with pytest.raises(InvalidParamsError):
        parse_curves("surface 0 4\n")
    with pytest.raises(InvalidParamsError):
        parse_curves("surface 0 4\nsurface 1 1\n")
    with pytest.raises(InvalidParamsError):
        parse_curves("surface 0 4\ncurve 1 1 1 1 1 1\n")  # inessential link
    with pytest.raises(InvalidParamsError):
        parse_curves("surface 0 4\nbogus\n")
    text = "# comment\nsurface 1 1\ncurve 1 0 1  # meridian\n"
    assert parse_curves(text)[0].coords == (1, 0, 1)


def test_format_rejects_mixed_signatures():
    a = slope_curve(S11, Slope.make(1, 0))
    b = slope_curve(S04, Slope.make(1, 0))
    with pytest.raises(TriangulationMismatchError):
        format_curves([a, b])
    with pytest.raises(InvalidParamsError):
        format_curves([])
