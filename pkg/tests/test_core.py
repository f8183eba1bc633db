import math

import pytest

from curvekit.core import (
    S04,
    S05,
    S11,
    S12,
    SurfaceSig,
    complexity,
    cutoff,
    dist_leq_two_log_plus_two,
    euler_characteristic,
    log2_or_zero,
    require_supported,
)
from curvekit.errors import InvalidParamsError, UnsupportedSignatureError


def test_signature_values():
    assert complexity(S11) == 1
    assert complexity(S04) == 1
    assert complexity(S05) == 2
    assert complexity(S12) == 2
    assert euler_characteristic(S11) == -1
    assert euler_characteristic(S04) == -2
    assert euler_characteristic(S05) == -3
    assert euler_characteristic(S12) == -2


def test_signature_str_and_validation():
    assert str(S05) == "S_0,5"
    with pytest.raises(InvalidParamsError):
        SurfaceSig(-1, 2)
    with pytest.raises(UnsupportedSignatureError):
        require_supported(SurfaceSig(2, 0))
    require_supported(S12)


def test_cutoff_bracket():
    assert cutoff(5, 5) == 0
    assert cutoff(6, 5) == 6
    assert cutoff(0, 200) == 0
    assert cutoff(201, 200) == 201
    with pytest.raises(InvalidParamsError):
        cutoff(-1, 5)
    with pytest.raises(InvalidParamsError):
        cutoff(3, -2)


def test_log_convention():
    assert log2_or_zero(0) == 0.0
    assert log2_or_zero(1) == 0.0
    assert log2_or_zero(2) == 1.0
    assert log2_or_zero(13) == pytest.approx(3.700439718141092)


def test_distance_log_inequality_matches_float_form():
    # exact predicate vs the float inequality it encodes, away from ties
    for d in range(0, 14):
        for i in range(0, 400):
            exact = dist_leq_two_log_plus_two(d, i)
            if i == 0:
                assert exact == (d <= 2)
                continue
            rhs = 2 * math.log2(i) + 2
            if abs(d - rhs) > 1e-9:
                assert exact == (d <= rhs)
            else:
                # tie: d == 2log2(i)+2 exactly, inequality not strict
                assert exact
