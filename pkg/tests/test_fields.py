import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panharmonia.fields import (
    SingularityError,
    catalog,
    make_control,
    make_fundamental,
    make_harmonic_fundamental,
    make_u_radial,
    parse_field,
)

pt3 = st.tuples(*[st.floats(-0.9, 0.9)] * 3).map(np.array)


def laplacian_fd(f, x, h=1e-3):
    # fourth-order centered stencil per axis
    m = x.size
    total = 0.0
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        total += (-f(x + 2 * e) + 16 * f(x + e) - 30 * f(x) + 16 * f(x - e) - f(x - 2 * e)) / (12 * h**2)
    return total


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_catalog_classes_by_finite_differences(m, mu):
    x = np.array([0.3, -0.2, 0.1][:m])
    for f in catalog(m, mu):
        lap, val = laplacian_fd(f, x), f(x)
        scale = max(1.0, abs(val))
        if f.meta.cls == "panharmonic":
            assert lap == pytest.approx(mu**2 * val, abs=1e-6 * scale), f.name
        elif f.meta.cls == "harmonic":
            assert abs(lap) < 1e-6 * scale, f.name
        else:
            assert abs(lap) > 1e-2 and abs(lap - mu**2 * val) > 1e-2, f.name


def test_u_radial_values():
    U = make_u_radial(3, 1.0)
    assert U([0, 0, 0]) == 1.0
    assert U([1, 0, 0]) == pytest.approx(math.sinh(1.0), rel=1e-15)


def test_fundamental_values_and_pole():
    E = make_fundamental(1.0, "-", [2, 0, 0])
    assert E([0, 0, 0]) == pytest.approx(math.exp(-2) / 2, rel=1e-15)
    with pytest.raises(SingularityError):
        E([2.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        make_fundamental(1.0, "-", [0, 0])


def test_harmonic_fundamental_normalization():
    em = make_harmonic_fundamental(3)
    assert em([1, 0, 0]) == pytest.approx(-1 / (4 * math.pi))


def test_batch_and_single():
    f = make_control("square_norm", 3)
    assert f([1, 2, 2]) == 9.0
    np.testing.assert_array_equal(f(np.ones((4, 3))), np.full(4, 3.0))
    with pytest.raises(ValueError):
        f([1, 2])


@given(pt3, st.floats(0.2, 3.0))
@settings(max_examples=40, deadline=None)
def test_scaled_field(x, s):
    U = make_u_radial(3, 1.0)
    V = U.scaled(s)
    assert V(x) == pytest.approx(U(s * x), rel=1e-14)
    assert V.meta.mu == pytest.approx(s)


def test_plane_wave_direction_checked():
    with pytest.raises(ValueError):
        make_control("plane_wave", 3, direction=[1, 1, 0])


def test_parse_field():
    assert parse_field("u_radial", 3, 2.0).meta.mu == 2.0
    f = parse_field("efund+@0,0,4")
    assert f.singular_points[0].tolist() == [0, 0, 4]
    assert parse_field("const:2.5")([0, 0, 0]) == 2.5
    assert parse_field("coord:2")([0, 7, 0]) == 7
    assert parse_field("planewave:2:0,0,3")([0, 0, 1]) == pytest.approx(math.exp(2))
    for bad in ("nope", "coord:9", "const:x", "efund-"):
        with pytest.raises(ValueError):
            parse_field(bad, dim=2 if bad == "efund-" else 3)


def test_catalog_poles_outside_closed_unit_ball():
    for f in catalog(3, 1.0):
        for p in f.singular_points:
            assert np.linalg.norm(p) >= 3.0
