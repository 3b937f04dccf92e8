import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinorbit.fields import FieldGrid, GridSpec, evaluate_on_grid, field_from_amplitudes, gaussian_profile, jones, power_density
from spinorbit.interferometer import single_input_output
from spinorbit.modes import PoincareAngles
from spinorbit.polarization import (
    apply_polarizer,
    apply_retarder,
    canonical_gamma,
    ellipse_map,
    polarized_power,
    polarizer_matrix,
    stokes,
)

SMALL = GridSpec(half_extent=3.0, samples=64)


def balanced_output(beta, sign, r, phi, port="c", E=1.0):
    pair = single_input_output("a", PoincareAngles(math.pi / 2, math.pi, math.pi / 2, beta), E, sign)
    vec = (pair.first if port == "c" else pair.second).vector
    return field_from_amplitudes(vec, r, phi)


def test_polarizer_examples():
    np.testing.assert_array_equal(polarizer_matrix(0.0), [[0, 0], [0, 1]])
    np.testing.assert_allclose(polarizer_matrix(math.pi / 4), 0.5 * np.ones((2, 2)), atol=1e-16)


@given(st.floats(-10, 10))
def test_polarizer_is_projector(g):
    m = polarizer_matrix(g)
    np.testing.assert_allclose(m, m.T)
    assert np.max(np.abs(m @ m - m)) < 1e-14
    assert np.trace(m) == pytest.approx(1, abs=1e-15)
    np.testing.assert_allclose(polarizer_matrix(canonical_gamma(g)), m, atol=1e-14)
    assert 0 <= canonical_gamma(g) < math.pi


@given(st.floats(0, math.pi), st.floats(0, math.pi))
def test_malus_law(gamma, chi):
    spec = GridSpec(2.0, 16)
    v = np.broadcast_to(np.array([math.sin(chi), math.cos(chi)], complex), (16, 16, 2)).copy()
    out = apply_polarizer(FieldGrid(spec, v), gamma)
    ratio = out.power() / power_density(v)
    np.testing.assert_allclose(ratio, math.cos(gamma - chi) ** 2, atol=1e-12)


def test_crossed_polarizer_blocks_y():
    fg = evaluate_on_grid(SMALL, lambda r, p, w: jones(0, gaussian_profile(r, w)))
    assert np.max(apply_polarizer(fg, math.pi / 2).power()) < 1e-30


def test_polarizer_never_adds_power(rng):
    v = rng.normal(size=(64, 64, 2)) + 1j * rng.normal(size=(64, 64, 2))
    for g in rng.uniform(0, math.pi, 10):
        assert np.all(power_density(apply_polarizer(v, g)) <= power_density(v) + 1e-12)


def test_retarder_identities(rng):
    v = rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2))
    np.testing.assert_array_equal(apply_retarder(v, 0.0), v)
    np.testing.assert_allclose(apply_retarder(v, 2 * math.pi), v, atol=1e-15)
    out = apply_retarder(v, 0.3)
    np.testing.assert_allclose(out[:, 0], v[:, 0] * np.exp(0.3j))
    np.testing.assert_array_equal(out[:, 1], v[:, 1])


def test_retarder_on_grid_keeps_spec():
    fg = FieldGrid(SMALL, np.ones((64, 64, 2), complex))
    out = apply_retarder(fg, 1.0)
    assert out.spec == SMALL


@pytest.mark.parametrize("sign", ["+", "-"])
def test_output_retarder_equals_input_beta(rng, sign):
    r, p = SMALL.polar()
    for beta in rng.uniform(-math.pi, math.pi, 5):
        via_input = apply_polarizer(balanced_output(beta, sign, r, p), math.pi / 4)
        via_retarder = apply_polarizer(apply_retarder(balanced_output(0.0, sign, r, p), beta), math.pi / 4)
        np.testing.assert_allclose(via_retarder, via_input, atol=1e-14)


@pytest.mark.parametrize("sign", ["+", "-"])
@pytest.mark.parametrize("port", ["c", "d"])
def test_formula_matches_pipeline(rng, sign, port):
    r, p = SMALL.polar()
    for _ in range(20):
        gamma, beta = rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi)
        E = rng.uniform(0.5, 2)
        pipe = power_density(apply_polarizer(apply_retarder(balanced_output(0.0, sign, r, p, port, E), beta), gamma))
        assert np.max(np.abs(polarized_power(gamma, beta, sign, r, p, amplitude=E) - pipe)) < 1e-10


def test_donut_for_vertical_and_horizontal_polarizer():
    p = np.linspace(0, 2 * math.pi, 361)
    for gamma in (0.0, math.pi / 2):
        for beta in (0.0, math.pi, 1.3):
            pw = polarized_power(gamma, beta, "+", 1.0, p)
            assert np.ptp(pw) < 1e-15
            assert pw[0] == pytest.approx(gaussian_profile(1.0) ** 2 / 8)


def view_profile(gamma, beta, sign="+"):
    view = np.linspace(0, 2 * math.pi, 720, endpoint=False)
    return view, polarized_power(gamma, beta, sign, 1.0, math.pi - view)


def test_diagonal_and_antidiagonal_lobes_in_source_view():
    g2 = gaussian_profile(1.0) ** 2
    view, pw = view_profile(math.pi / 4, math.pi)
    np.testing.assert_allclose(pw, g2 / 4 * np.cos(math.pi / 4 + view) ** 2, atol=1e-15)
    view, pw = view_profile(3 * math.pi / 4, math.pi)
    np.testing.assert_allclose(pw, g2 / 4 * np.sin(math.pi / 4 + view) ** 2, atol=1e-15)


def test_beta_turns_lobes_anticlockwise_in_source_view():
    g2 = gaussian_profile(1.0) ** 2
    for beta in np.linspace(0, 2 * math.pi, 9):
        view, pw = view_profile(math.pi / 4, beta)
        np.testing.assert_allclose(pw, g2 / 4 * np.sin(math.pi / 4 + view - beta / 2) ** 2, atol=1e-15)


@given(st.floats(-math.pi, math.pi), st.floats(-10, 10))
def test_beta_rotation_equivariance(beta, phi):
    a = polarized_power(math.pi / 4, beta, "+", 1.0, phi)
    b = polarized_power(math.pi / 4, 0.0, "+", 1.0, phi + beta / 2)
    assert a == pytest.approx(b, abs=1e-10)


def test_stokes_and_ellipse_basic_states():
    e = ellipse_map(jones(0, 1))
    assert e.orientation == pytest.approx(math.pi / 2)
    assert e.ellipticity == pytest.approx(0)
    e = ellipse_map(jones(1j, 1) / math.sqrt(2))
    assert abs(e.ellipticity) == pytest.approx(1)
    e = ellipse_map(jones(1, 0))
    assert e.orientation == 0 and e.intensity == 1


def test_dark_pixels_report_zero():
    e = ellipse_map(jones(np.zeros(3), np.zeros(3)))
    np.testing.assert_array_equal(e.orientation, 0)
    np.testing.assert_array_equal(e.ellipticity, 0)


def test_stokes_pure_state_identity(rng):
    v = rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))
    s0, s1, s2, s3 = stokes(v)
    np.testing.assert_allclose(s0**2, s1**2 + s2**2 + s3**2, rtol=1e-12)
    e = ellipse_map(v)
    assert np.all((0 <= e.orientation) & (e.orientation < math.pi))
    assert np.all(np.abs(e.ellipticity) <= 1 + 1e-12)


def test_balanced_output_polarization_structure():
    # |ex| = |ey| everywhere: S1 vanishes, the ellipse axis sits at +-45 degrees
    # and the handedness cycles with the relative phase beta + 2 phi
    p = np.linspace(0.01, 2 * math.pi, 200)
    f = balanced_output(0.0, "+", 1.0, p)
    s0, s1, s2, s3 = stokes(f)
    np.testing.assert_allclose(s1, 0, atol=1e-15)
    # ex / ey = i e^{i(beta + 2 phi)}
    np.testing.assert_allclose(s2 / s0, -np.sin(2 * p), atol=1e-12)
    np.testing.assert_allclose(s3 / s0, -np.cos(2 * p), atol=1e-12)


def test_ellipse_map_beta_equivariance():
    r, p = SMALL.polar()
    beta = 1.2
    a = ellipse_map(FieldGrid(SMALL, balanced_output(beta, "+", r, p)))
    b = ellipse_map(FieldGrid(SMALL, balanced_output(0.0, "+", r, p + beta / 2)))
    lit = a.intensity > 1e-6
    np.testing.assert_allclose(a.intensity, b.intensity, atol=1e-14)
    np.testing.assert_allclose(a.ellipticity[lit], b.ellipticity[lit], atol=1e-10)
    d = np.mod(a.orientation - b.orientation + math.pi / 2, math.pi) - math.pi / 2
    assert np.max(np.abs(d[lit])) < 1e-8
