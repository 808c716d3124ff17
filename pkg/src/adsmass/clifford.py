"""Clifford algebra of R^{3,1} on C^4, the spinor form and spinor Killing fields.

Spinors are complex 4-vectors psi = (w1, w2, u1, u2), read as the pair
(v1, v2) = ((w1, w2), (u1, u2)).  The form

    (phi, psi) = <phi_v1, psi_v2> + <phi_v2, psi_v1>

is linear in phi and conjugate-linear in psi; in matrix terms it equals
psi^H gamma0 phi.  ``<a, b> = sum a_k conj(b_k)`` is the standard Hermitian
product used for the auxiliary bilinears E, F, G, H.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import BadIndex, DegenerateInput, NotInSpinorSet
from .so32 import EPS, KillingField

GAMMA0 = np.array([[0, 0, 1, 0],
                   [0, 0, 0, 1],
                   [1, 0, 0, 0],
                   [0, 1, 0, 0]], dtype=complex)
GAMMA1 = np.array([[0, 0, 1, 0],
                   [0, 0, 0, -1],
                   [-1, 0, 0, 0],
                   [0, 1, 0, 0]], dtype=complex)
GAMMA2 = np.array([[0, 0, 0, 1],
                   [0, 0, 1, 0],
                   [0, -1, 0, 0],
                   [-1, 0, 0, 0]], dtype=complex)
GAMMA3 = np.array([[0, 0, 0, -1j],
                   [0, 0, 1j, 0],
                   [0, 1j, 0, 0],
                   [-1j, 0, 0, 0]], dtype=complex)
GAMMAS = (GAMMA0, GAMMA1, GAMMA2, GAMMA3)
for _g in GAMMAS:
    _g.setflags(write=False)

# g_a g_b + g_b g_a = 2 G_ab with G = diag(1, -1, -1, -1)
CLIFFORD_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def clifford_relation_residual() -> float:
    return max(float(np.max(np.abs(GAMMAS[a] @ GAMMAS[b] + GAMMAS[b] @ GAMMAS[a]
                                   - 2 * CLIFFORD_METRIC[a, b] * np.eye(4))))
               for a in range(4) for b in range(4))


# strictly increasing multi-indices drawn from {0,1,2,3}: 1 + 4 + 6 + 4 + 1
MULTI_INDICES = tuple(idx for k in range(5) for idx in itertools.combinations(range(4), k))


def gamma(indices=()) -> np.ndarray:
    """Product gamma_{i1} ... gamma_{ik} for a strictly increasing index tuple."""
    idx = tuple(int(i) for i in indices)
    if any(i not in range(4) for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
        raise BadIndex(f"indices must be strictly increasing in 0..3, got {indices!r}")
    out = np.eye(4, dtype=complex)
    for i in idx:
        out = out @ GAMMAS[i]
    return out


def hermitian_sign(indices) -> int:
    """(-1)^{k(k+1)/2 + s}: +1 if the product is Hermitian, -1 if skew-Hermitian.

    It is also the sign of the square of the product.
    """
    k = len(indices)
    s = 1 if 0 in indices else 0
    return (-1) ** (k * (k + 1) // 2 + s)


@dataclass(frozen=True)
class GammaBasis:
    matrices: dict
    signs: dict

    @classmethod
    def build(cls):
        return cls({idx: gamma(idx) for idx in MULTI_INDICES},
                   {idx: hermitian_sign(idx) for idx in MULTI_INDICES})


GAMMA_BASIS = GammaBasis.build()


# ---------------------------------------------------------------------------
# forms and the spinor -> Killing field map

def as_spinor(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"a spinor has 4 complex components, got shape {v.shape}")
    return v


def spinor_form(phi, psi) -> complex:
    phi, psi = as_spinor(phi), as_spinor(psi)
    return complex(phi[:2] @ psi[2:].conj() + phi[2:] @ psi[:2].conj())


def hermitian(X, psi) -> complex:
    """<X psi, psi> for the standard Hermitian product."""
    return complex(psi.conj() @ X @ psi)


def clifford_vector(x) -> np.ndarray:
    """Clifford multiplication by x = x0 e0 + xi ei in R^{3,1}."""
    x = np.asarray(x, dtype=float)
    return sum(xi * g for xi, g in zip(x, GAMMAS))


def _spatial_pairs():
    # (j, k, l) with eps_{jkl} = +1, k and l as gamma indices 1..3
    return [(j, k + 1, l + 1) for j in range(3) for k in range(3) for l in range(3) if EPS[j, k, l] > 0]


# operators whose (., psi)-form gives A, B_j, C_j, D_j
_A_OP = GAMMA0
_B_OPS = [-GAMMAS[j] for j in (1, 2, 3)]
_C_OPS = [1j * GAMMA0 @ GAMMAS[j] for j in (1, 2, 3)]
_D_OPS = [np.zeros((4, 4), dtype=complex) for _ in range(3)]
for _j, _k, _l in _spatial_pairs():
    # (i/2) eps^{jkl} gamma_k gamma_l summed over k, l: the two orders add up
    _D_OPS[_j] = 1j * GAMMAS[_k] @ GAMMAS[_l]
_KILLING_OPS = np.array([_A_OP] + _B_OPS + _C_OPS + _D_OPS)
# (X psi, psi) = psi^H gamma0 X psi
_KILLING_FORMS = np.einsum("ab,nbc->nac", GAMMA0, _KILLING_OPS)


def spinor_to_killing_complex(psi) -> np.ndarray:
    """The ten bilinears before discarding their (vanishing) imaginary parts."""
    psi = as_spinor(psi)
    return np.einsum("a,nab,b->n", psi.conj(), _KILLING_FORMS, psi)


def spinor_to_killing(psi) -> KillingField:
    return KillingField.from_vector(spinor_to_killing_complex(psi).real)


@dataclass(frozen=True)
class SpinorBilinears:
    A: float
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    F: float
    G: float
    H: float

    @property
    def delta2(self) -> float:
        return float(-self.B @ np.cross(self.C, self.D) / self.A)

    def contraction_residuals(self) -> dict:
        """Residuals of the eight Fierz contraction identities."""
        A, B, C, D, E, F, G, H = (self.A, self.B, self.C, self.D, self.E, self.F, self.G, self.H)
        return {
            "3A^2": 3 * A * A - (B @ B + C @ C + D @ D + E @ E + F * F + G * G + H * H),
            "AB": float(np.max(np.abs(A * B + np.cross(C, D) - H * E))),
            "AC": float(np.max(np.abs(A * C + np.cross(D, B) - F * E))),
            "AD": float(np.max(np.abs(A * D + np.cross(B, C) - G * E))),
            "AE": float(np.max(np.abs(A * E - H * B - F * C - G * D))),
            "AH": A * H - B @ E,
            "AF": A * F - C @ E,
            "AG": A * G - D @ E,
        }


_E_OPS = [np.zeros((4, 4), dtype=complex) for _ in range(3)]
for _j, _k, _l in _spatial_pairs():
    _E_OPS[_j] = 1j * GAMMAS[_k] @ GAMMAS[_l]
_F_OP = -gamma((1, 2, 3))
_G_OP = GAMMA0
_H_OP = -1j * gamma((0, 1, 2, 3))


def spinor_bilinears(psi) -> SpinorBilinears:
    psi = as_spinor(psi)
    K = spinor_to_killing(psi)
    E = np.array([hermitian(X, psi).real for X in _E_OPS])
    return SpinorBilinears(K.A, K.B, K.C, K.D, E,
                           hermitian(_F_OP, psi).real,
                           hermitian(_G_OP, psi).real,
                           hermitian(_H_OP, psi).real)


# ---------------------------------------------------------------------------
# Fierz

def fierz_tensor() -> np.ndarray:
    """T[a, m, n, b] = sum over the basis of sign * (g)_a^b (g)_n^m."""
    T = np.zeros((4, 4, 4, 4), dtype=complex)
    for idx in MULTI_INDICES:
        g = GAMMA_BASIS.matrices[idx]
        T += GAMMA_BASIS.signs[idx] * np.einsum("ab,nm->amnb", g, g)
    return T


def verify_fierz() -> float:
    identity = 4 * np.einsum("am,nb->amnb", np.eye(4), np.eye(4))
    return float(np.max(np.abs(fierz_tensor() - identity)))


def fierz_expand(M) -> np.ndarray:
    """Reconstruct M from its traces against the 16 gamma products."""
    M = np.asarray(M, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for idx in MULTI_INDICES:
        g = GAMMA_BASIS.matrices[idx]
        out += GAMMA_BASIS.signs[idx] * g * np.trace(g @ M)
    return out / 4


# ---------------------------------------------------------------------------
# spinor-side lifts of isometries

def time_translation_lift(theta: float) -> np.ndarray:
    """U with spinor_to_killing(U psi) == rotate_BC(spinor_to_killing(psi), theta)."""
    return np.cos(theta / 2) * np.eye(4) + 1j * np.sin(theta / 2) * GAMMA0


# psi -> psi~ with (A, B, C, D)(psi~) = (A, D, B, C)(psi)
PERMUTATION = np.array([[1j, 0, 1j, 0],
                        [0, 1j, 0, 1j],
                        [1, 0, -1, 0],
                        [0, 1, 0, -1]], dtype=complex) / np.sqrt(2)
PERMUTATION_INV = np.linalg.inv(PERMUTATION)

_PAULI = (np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]], dtype=complex),
          np.array([[1, 0], [0, -1]], dtype=complex))


def sl2c_action(g) -> np.ndarray:
    """rho(g) = diag(conj(g), (g^T)^-1)."""
    g = np.asarray(g, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = g.conj()
    out[2:, 2:] = np.linalg.inv(g.T)
    return out


def rotation_lift(R) -> np.ndarray:
    """Spinor matrix S with spinor_to_killing(S psi) == (A, R B, R C, R D).

    An infinitesimal rotation about e_x, e_y, e_z is generated in SU(2) by
    i sigma_z / 2, i sigma_x / 2 and -i sigma_y / 2 respectively.
    """
    rotvec = Rotation.from_matrix(np.asarray(R, dtype=float)).as_rotvec()
    X = 0.5j * (rotvec[0] * _PAULI[2] + rotvec[1] * _PAULI[0] - rotvec[2] * _PAULI[1])
    # X is anti-Hermitian and traceless, exp via eigen-decomposition of i X
    w, V = np.linalg.eigh(-1j * X)
    g = V @ np.diag(np.exp(1j * w)) @ V.conj().T
    return sl2c_action(g)


def _rotation_taking(frame_from, frame_to) -> np.ndarray:
    """Proper rotation with R @ frame_from[:, k] == frame_to[:, k] (orthonormal columns)."""
    return np.asarray(frame_to) @ np.asarray(frame_from).T


def _rotation_aligning(u, w) -> np.ndarray:
    """Some proper rotation taking unit u to unit w."""
    R, _ = Rotation.align_vectors(np.atleast_2d(w), np.atleast_2d(u))
    return R.as_matrix()


# ---------------------------------------------------------------------------
# preimage of a spinor Killing field

def rotating_cd_spinor(theta: float) -> np.ndarray:
    return np.array([1, np.exp(-1j * theta), np.exp(1j * theta), 1]) / 2


FRAME_SPINOR = np.array([-1, 1j, 1j, -1]) / 2
# image of FRAME_SPINOR: (1, (0,0,-1), (1,0,0), (0,1,0))


def _zero_b_preimage(C, D):
    """Preimage of (1, 0, C, D) with C parallel to D and |C|^2 + |D|^2 = 1."""
    w = C if np.linalg.norm(C) >= np.linalg.norm(D) else D
    w = w / np.linalg.norm(w)
    theta = np.arctan2(-(C @ w), D @ w)
    # image of rotating_cd_spinor(theta) is C = -sin(theta) u, D = cos(theta) u
    u = np.array([0.0, np.cos(theta), -np.sin(theta)])
    return rotation_lift(_rotation_aligning(u, w)) @ rotating_cd_spinor(theta)


def _normal_form_preimage(b, c, gam, mu, tie_tol):
    """Preimage of (1, (-b,0,0), (0,c,-gam), (0,mu,c))."""
    if abs(mu - gam) <= tie_tol:
        # image of FRAME_SPINOR is (1, -e3, e1, e2); move that frame onto (-e1, C, D)
        C = np.array([0.0, c, -gam])
        D = np.array([0.0, mu, c])
        C, D = C / np.linalg.norm(C), D / np.linalg.norm(D)
        R = _rotation_taking(np.eye(3)[:, [2, 0, 1]], np.column_stack([np.array([1.0, 0, 0]), C, D]))
        return rotation_lift(R) @ FRAME_SPINOR
    sc = np.sign(c)
    if mu < gam:
        alpha = (mu + gam) / (mu - gam)
        beta = -2 * sc / (gam - mu) * np.sqrt(max((1 - gam) * (1 + mu), 0.0))
        w2 = np.sqrt(alpha + 1j * beta)
        return np.sqrt(gam - mu) / 2 * np.array([1, w2, -np.conj(w2), -1])
    alpha = (mu + gam) / (mu - gam)
    beta = 2 * sc / (mu - gam) * np.sqrt(max((1 + gam) * (1 - mu), 0.0))
    w2 = np.sqrt(alpha + 1j * beta)
    return np.sqrt(mu - gam) / 2 * np.array([1, w2, np.conj(w2), 1])


def spinor_preimage(K: KillingField, tol=1e-9) -> np.ndarray:
    """A spinor whose Killing field is K, for K in the spinor set.

    Follows the constructive membership argument: normalise A = 1, rotate
    (B, C) until B.D = 0, permute (B, C, D) so that |B|^2 = Delta^2, rotate
    space into the normal form (1, (-b,0,0), (0,c,-gam), (0,mu,c)) and use the
    explicit spinors for that form; each step is undone on the spinor side.
    """
    from .killing_sets import is_spinor_killing, rotate_BC

    if K.A <= tol * K.scale():
        raise DegenerateInput("spinor preimage needs A > 0")
    report = is_spinor_killing(K, tol=max(tol, 1e-9))
    if not report.member:
        raise NotInSpinorSet("K fails the spinor-set relations", residuals=report.residuals)

    A = K.A
    K1 = K / A
    bd, cd = K1.B @ K1.D, K1.C @ K1.D
    theta = float(np.arctan2(bd, -cd)) if (bd or cd) else 0.0
    K1 = rotate_BC(K1, theta)
    ops = [time_translation_lift(-theta)]

    delta2 = -K1.B @ np.cross(K1.C, K1.D)
    if abs(K1.D @ K1.D - delta2) < abs(K1.B @ K1.B - delta2):
        # (A, B, C, D) -> (A, D, B, C) on fields is psi -> PERMUTATION psi
        K1 = KillingField(1.0, K1.D, K1.B, K1.C)
        ops.append(PERMUTATION_INV)

    B, C, D = K1.B, K1.C, K1.D
    b = float(np.linalg.norm(B))
    if b <= 1e-12:
        psi = _zero_b_preimage(C, D)
    else:
        e1 = -B / b
        # C and D are orthogonal to B; choose e2, e3 so that C.e2 == D.e3
        perp = C - (C @ e1) * e1
        ref = perp if np.linalg.norm(perp) > 1e-12 else np.cross(e1, np.eye(3)[np.argmin(np.abs(e1))])
        f2 = ref / np.linalg.norm(ref)
        f3 = np.cross(e1, f2)
        c2, c3, d2, d3 = C @ f2, C @ f3, D @ f2, D @ f3
        chi = np.arctan2(d3 - c2, c3 + d2)
        e2 = np.cos(chi) * f2 + np.sin(chi) * f3
        e3 = np.cross(e1, e2)
        frame = np.array([e1, e2, e3])  # rows: new axes in old coordinates
        Cn, Dn = frame @ C, frame @ D
        c = 0.5 * (Cn[1] + Dn[2])
        psi = _normal_form_preimage(b, c, -Cn[2], Dn[1], tie_tol=1e-12)
        # fields in new coordinates = frame @ old, so undo with frame^T
        ops.append(rotation_lift(frame.T))

    for op in reversed(ops):
        psi = op @ psi
    return np.sqrt(A) * psi
