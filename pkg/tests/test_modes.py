import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinorbit.errors import InvalidParameterError
from spinorbit.modes import (
    BASIS,
    BasisModeIndex,
    PoincareAngles,
    SpinOrbitAmplitudes,
    parity_sign,
    product_amplitudes,
    same_state,
    separability_witness,
)

from conftest import angles_strategy, finite_angle


def test_both_poles_give_pure_e00():
    a = product_amplitudes(PoincareAngles(0, 0, 0, 0))
    assert a.vector.tolist() == [1, 0, 0, 0]


def test_balanced_preparation():
    a = product_amplitudes(PoincareAngles(math.pi / 2, math.pi, math.pi / 2, 0))
    np.testing.assert_allclose(a.vector, [0.5, -0.5, -0.5, 0.5], atol=1e-15)


def test_lg_preparation_ratio_and_norm():
    alpha = 0.7
    a = product_amplitudes(PoincareAngles(math.pi / 2, -math.pi / 2, alpha, 0.3))
    # cos(pi/4) = sin(pi/4), so e10/e00 is the bare phase e^{-i pi/2}
    assert a.e10 / a.e00 == pytest.approx(-1j, abs=1e-15)
    assert a.power() == pytest.approx(1.0, abs=1e-12)
    expected = [
        math.cos(math.pi / 4) * math.cos(alpha / 2),
        math.sin(math.pi / 4) * math.sin(alpha / 2) * np.exp(1j * (-math.pi / 2 + 0.3)),
        math.sin(math.pi / 4) * math.cos(alpha / 2) * np.exp(-1j * math.pi / 2),
        math.cos(math.pi / 4) * math.sin(alpha / 2) * np.exp(0.3j),
    ]
    np.testing.assert_allclose(a.vector, expected, atol=1e-15)


def test_amplitude_scales_linearly():
    ang = PoincareAngles(1.0, 2.0, 0.5, -1.0)
    np.testing.assert_allclose(product_amplitudes(ang, 3.0).vector, 3 * product_amplitudes(ang).vector)


@pytest.mark.parametrize("j,k,expected", [(0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 1)])
def test_parity_sign(j, k, expected):
    assert parity_sign(BasisModeIndex(j, k)) == expected
    assert parity_sign(BasisModeIndex(k, j)) == expected
    assert (expected == 1) == (j == k)


def test_parity_sign_rejects_non_binary():
    with pytest.raises(InvalidParameterError):
        parity_sign(BasisModeIndex(2, 0))


def test_basis_order_and_labels():
    assert [i.label for i in BASIS] == ["00", "11", "10", "01"]
    assert [i.even for i in BASIS] == [True, True, False, False]


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_angle_rejected(bad):
    with pytest.raises(InvalidParameterError):
        PoincareAngles(bad, 0, 0, 0)


@pytest.mark.parametrize("amp", [-1.0, math.nan, math.inf])
def test_bad_amplitude_rejected(amp):
    with pytest.raises(InvalidParameterError):
        product_amplitudes(PoincareAngles(0, 0, 0, 0), amp)


def test_from_vector_shape_checked():
    with pytest.raises(InvalidParameterError):
        SpinOrbitAmplitudes.from_vector([1, 0, 0])


def test_getitem_by_index():
    a = SpinOrbitAmplitudes(1, 2, 3, 4)
    assert [a[i] for i in BASIS] == [1, 2, 3, 4]


@given(angles_strategy)
def test_normalization(angles):
    assert product_amplitudes(angles).power() == pytest.approx(1.0, abs=1e-12)


@given(angles_strategy, st.floats(0, 10))
def test_product_states_are_separable(angles, amp):
    assert abs(separability_witness(product_amplitudes(angles, amp))) < 1e-12 * max(1.0, amp**2)


def test_witness_detects_entangled_vector():
    assert abs(separability_witness(SpinOrbitAmplitudes(1, 1, 0, 0))) == 1


@given(finite_angle, finite_angle, finite_angle, finite_angle)
def test_canonical_ranges_and_same_state(t, p, a, b):
    ang = PoincareAngles(t, p, a, b)
    can = ang.canonical()
    assert 0 <= can.theta <= math.pi and 0 <= can.alpha <= math.pi
    assert -math.pi <= can.phi < math.pi and -math.pi <= can.beta < math.pi
    assert same_state(product_amplitudes(ang), product_amplitudes(can), atol=1e-9)


def test_same_state_global_phase_only():
    a = product_amplitudes(PoincareAngles(1.0, 0.2, 2.0, 0.4))
    assert same_state(a, a.scaled(np.exp(0.77j)))
    assert not same_state(a, a.scaled(2.0))
    b = product_amplitudes(PoincareAngles(1.0, 0.3, 2.0, 0.4))
    assert not same_state(a, b)
