import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from adsmass.clifford import (
    FRAME_SPINOR, GAMMA0, GAMMA_BASIS, MULTI_INDICES, PERMUTATION, clifford_relation_residual,
    fierz_expand, fierz_tensor, gamma, hermitian_sign, rotation_lift, spinor_bilinears,
    spinor_form, spinor_preimage, spinor_to_killing, time_translation_lift, verify_fierz,
    rotating_cd_spinor,
)
from adsmass.errors import BadIndex, DegenerateInput, NotInSpinorSet
from adsmass.killing_sets import WITNESS, is_spinor_killing, rotate_BC
from adsmass.so32 import KillingField

WITNESS_SPINOR = np.array([1, 0, 1 + 1j, 0])

component = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
spinors = st.lists(component, min_size=8, max_size=8).map(
    lambda v: np.array(v[:4]) + 1j * np.array(v[4:]))


def random_spinor(rng):
    return rng.normal(size=4) + 1j * rng.normal(size=4)


def test_clifford_relations():
    assert clifford_relation_residual() == 0.0


@pytest.mark.parametrize("phi, psi, value", [
    ((1, 0, 1, 0), (1, 0, 1, 0), 2),
    ((1, 0, 0, 0), (1, 0, 0, 0), 0),
    (WITNESS_SPINOR, WITNESS_SPINOR, 2),
])
def test_spinor_form(phi, psi, value):
    assert spinor_form(phi, psi) == pytest.approx(value)


def test_spinor_form_is_gamma0_sandwich():
    rng = np.random.default_rng(0)
    phi, psi = random_spinor(rng), random_spinor(rng)
    assert spinor_form(phi, psi) == pytest.approx(psi.conj() @ GAMMA0 @ phi)


def test_gamma_products():
    np.testing.assert_array_equal(gamma(()), np.eye(4))
    np.testing.assert_array_equal(gamma((0,)), GAMMA0)
    np.testing.assert_allclose(gamma((2, 3)) @ WITNESS_SPINOR, [-1j, 0, 1 - 1j, 0])


@pytest.mark.parametrize("bad", [(1, 1), (2, 1), (4,), (-1,)])
def test_gamma_bad_index(bad):
    with pytest.raises(BadIndex):
        gamma(bad)


@pytest.mark.parametrize("idx", MULTI_INDICES)
def test_hermitian_sign_rule(idx):
    g = gamma(idx)
    s = hermitian_sign(idx)
    np.testing.assert_allclose(g.conj().T, s * g, atol=1e-15)
    np.testing.assert_allclose(g @ g, s * np.eye(4), atol=1e-15)


def test_gamma_basis_spans():
    flat = np.array([GAMMA_BASIS.matrices[i].ravel() for i in MULTI_INDICES])
    assert np.linalg.matrix_rank(flat) == 16


@pytest.mark.parametrize("psi, K", [
    (WITNESS_SPINOR, WITNESS),
    (np.array([1, -1j, 1j, 1]) / 2, KillingField(1, [0, 0, 0], [0, 0, 1], [0, 0, 0])),
    (FRAME_SPINOR, KillingField(1, [0, 0, -1], [1, 0, 0], [0, 1, 0])),
])
def test_spinor_to_killing_examples(psi, K):
    assert spinor_to_killing(psi).allclose(K, atol=1e-12)


@pytest.mark.parametrize("th", np.linspace(0, 2 * np.pi, 7))
def test_rotating_cd_family(th):
    # C = -sin(th) u, D = cos(th) u with u = (0, cos th, -sin th)
    u = np.array([0, np.cos(th), -np.sin(th)])
    expected = KillingField(1, [0, 0, 0], -np.sin(th) * u, np.cos(th) * u)
    assert spinor_to_killing(rotating_cd_spinor(th)).allclose(expected, atol=1e-12)


@given(spinors)
def test_spinor_map_is_quadratic(psi):
    np.testing.assert_allclose(spinor_to_killing(2 * psi).vector, 4 * spinor_to_killing(psi).vector, atol=1e-9)
    np.testing.assert_allclose(spinor_to_killing(1j * psi).vector, spinor_to_killing(psi).vector, atol=1e-9)


def test_bilinears_of_zero():
    bl = spinor_bilinears(np.zeros(4))
    assert bl.A == 0 and not bl.B.any() and not bl.E.any() and bl.F == bl.G == bl.H == 0


def test_fierz_full_scan():
    assert verify_fierz() <= 1e-13
    assert fierz_tensor()[0, 0, 0, 0] == pytest.approx(4)


def test_fierz_expansion_reconstructs():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_allclose(fierz_expand(M), M, atol=1e-13)


@settings(max_examples=200)
@given(spinors)
def test_contraction_identities(psi):
    bl = spinor_bilinears(psi)
    s2 = max(1.0, np.max(np.abs(spinor_to_killing(psi).vector))) ** 2
    for name, r in bl.contraction_residuals().items():
        assert abs(r) <= 1e-9 * s2, name


def test_auxiliary_h_identity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        bl = spinor_bilinears(random_spinor(rng))
        assert bl.H ** 2 == pytest.approx(bl.B @ bl.B - bl.delta2, abs=1e-9)


@settings(max_examples=200)
@given(spinors.filter(lambda p: np.linalg.norm(p) > 1e-3))
def test_images_are_spinor_fields(psi):
    assert is_spinor_killing(spinor_to_killing(psi)).member


def test_time_translation_lift():
    rng = np.random.default_rng(3)
    psi = random_spinor(rng)
    for th in (0.3, 1.0, -2.0):
        lhs = spinor_to_killing(time_translation_lift(th) @ psi)
        assert lhs.allclose(rotate_BC(spinor_to_killing(psi), th), atol=1e-12)


def test_permutation_lift():
    rng = np.random.default_rng(4)
    psi = random_spinor(rng)
    K = spinor_to_killing(psi)
    assert spinor_to_killing(PERMUTATION @ psi).allclose(KillingField(K.A, K.D, K.B, K.C), atol=1e-12)


def test_rotation_lift_rotates_all_three_vectors():
    rng = np.random.default_rng(5)
    for k in range(10):
        R = Rotation.random(random_state=k).as_matrix()
        psi = random_spinor(rng)
        K = spinor_to_killing(psi)
        expected = KillingField(K.A, R @ K.B, R @ K.C, R @ K.D)
        assert spinor_to_killing(rotation_lift(R) @ psi).allclose(expected, atol=1e-12)


@pytest.mark.parametrize("K", [WITNESS, KillingField(1, [0, 0, -1], [1, 0, 0], [0, 1, 0]),
                               KillingField(1, [0, 0, 0], [0, 0, 1], [0, 0, 0]),
                               KillingField(2, [0, 0, 0], [0, 0, 0], [0, 0, 2])])
def test_preimage_examples(K):
    psi = spinor_preimage(K)
    assert np.max(np.abs(spinor_to_killing(psi).vector - K.vector)) <= 1e-8 * K.scale()


def test_preimage_random_round_trip():
    rng = np.random.default_rng(6)
    for _ in range(100):
        K = spinor_to_killing(random_spinor(rng))
        back = spinor_to_killing(spinor_preimage(K))
        assert np.max(np.abs(back.vector - K.vector)) <= 1e-8 * K.scale()


def test_preimage_on_scaled_and_sparse_fields():
    # spinors with zero entries hit the degenerate branches of the construction
    rng = np.random.default_rng(7)
    for _ in range(100):
        psi = random_spinor(rng) * rng.integers(0, 2, size=4) * 10 ** rng.uniform(-2, 2)
        if not psi.any():
            continue
        K = spinor_to_killing(psi)
        back = spinor_to_killing(spinor_preimage(K))
        assert np.max(np.abs(back.vector - K.vector)) <= 1e-8 * K.scale()


def test_preimage_errors():
    with pytest.raises(NotInSpinorSet):
        spinor_preimage(KillingField(1, [0, 0, 0], [0, 0, 0], [0, 0, 0]))
    with pytest.raises(DegenerateInput):
        spinor_preimage(KillingField(0, [1, 0, 0], [0, 0, 0], [0, 0, 0]))
