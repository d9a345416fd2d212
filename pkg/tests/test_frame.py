import numpy as np
import pytest
from fractions import Fraction

from gradedgroups import fixtures
from gradedgroups.frame import FrameCoordinates, compute_frame, speed, translate_vector
from gradedgroups.poly import RationalPoly

HALF = Fraction(1, 2)
TWELFTH = Fraction(1, 12)


@pytest.fixture(scope="module")
def heis():
    return fixtures.group_law("heisenberg")


@pytest.fixture(scope="module")
def engel():
    return fixtures.group_law("engel")


def test_heisenberg_entries(heis):
    fr = heis.frame
    x1 = RationalPoly.variable(3, 0)
    x2 = RationalPoly.variable(3, 1)
    assert fr.entry(2, 0) == -HALF * x2
    assert fr.entry(2, 1) == HALF * x1


def test_engel_entries(engel):
    fr = engel.frame
    x1 = RationalPoly.variable(4, 0)
    x2 = RationalPoly.variable(4, 1)
    x3 = RationalPoly.variable(4, 2)
    assert fr.entry(3, 0) == -HALF * x3 - TWELFTH * x1 * x2
    assert fr.entry(3, 1) == TWELFTH * x1 * x1
    assert fr.entry(3, 2) == HALF * x1


def test_entries_are_weight_homogeneous(engel):
    fr = engel.frame
    degs = engel.degrees
    for (l, j), p in fr.entries.items():
        assert p.weighted_degree(degs) == degs[l] - degs[j]


def test_matrix_is_unit_lower_triangular(engel):
    rng = np.random.default_rng(4)
    for _ in range(5):
        a = engel.frame.matrix(rng.uniform(-2, 2, 4))
        assert np.allclose(np.diag(a), 1.0)
        assert np.allclose(np.triu(a, 1), 0.0)


def test_coordinates_solve_example(heis):
    lam = heis.frame.coordinates(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 1.0]))
    assert np.allclose(lam, [0.0, 1.0, 0.5])


def test_coordinates_reconstruct_roundtrip(engel):
    fr = engel.frame
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = rng.uniform(-1.5, 1.5, 4)
        v = rng.uniform(-2, 2, 4)
        lam = fr.coordinates(x, v)
        assert np.allclose(fr.reconstruct(x, lam), v, atol=1e-12)


def test_translate_vector_keeps_coordinates(heis):
    fc = FrameCoordinates(np.array([1.0, 0.0, 0.0]), np.zeros(3))
    moved = translate_vector(heis, fc, np.array([0.0, 1.0, 0.0]))
    assert np.allclose(moved.base_point, [0.0, 1.0, 0.0])
    assert np.allclose(moved.lam, fc.lam)
    # the ambient vector picks up the frame twist at the new base point
    ambient = heis.frame.reconstruct(moved.base_point, moved.lam)
    assert np.allclose(ambient, [1.0, 0.0, -0.5])


def test_translate_vector_pushforward_consistency(engel):
    rng = np.random.default_rng(12)
    for _ in range(5):
        base = rng.uniform(-1, 1, 4)
        lam = rng.uniform(-1, 1, 4)
        x = rng.uniform(-1, 1, 4)
        moved = translate_vector(engel, FrameCoordinates(lam, base), x, check=True)
        assert np.allclose(moved.lam, lam)


def test_speed_left_vs_euclidean(heis):
    x = np.array([0.0, 1.0, 0.0])
    v = heis.frame.reconstruct(x, np.array([1.0, 0.0, 0.0]))
    assert speed(heis.frame, x, v, "left") == pytest.approx(1.0)
    assert speed(heis.frame, x, v, "euclidean") == pytest.approx(np.sqrt(1.25))
    with pytest.raises(ValueError):
        speed(heis.frame, x, v, "taxicab")


def test_compute_frame_matches_lazy_property(heis):
    fresh = compute_frame(heis)
    assert fresh.entries == heis.frame.entries


def test_describe_layout(engel):
    d = engel.frame.describe()
    assert d["a[4,3]"] == "1/2*x1"
    assert set(d) == {"a[3,1]", "a[3,2]", "a[4,1]", "a[4,2]", "a[4,3]"}
