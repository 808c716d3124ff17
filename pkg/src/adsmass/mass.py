"""Rest mass of conserved charges: closed form, optimal observer, numeric
infimum, the energy matrix Q and Casimir traces.

The rest mass is the infimum of pair(mu, K) over observer fields K, with
closed form m^2 = (alpha + sqrt(beta)) / 2.  It is finite exactly when the
energy matrix Q is positive semi-definite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .clifford import GAMMA0, GAMMAS
from .errors import Degenerate, NotPositive
from .so32 import (EPS, ConservedCharges, KillingField, adjoint_action, boost_to_rest_frame,
                   group_inverse, invariants, pair)

NULL_ENERGY_MOMENTUM = "NullEnergyMomentum"
BOUNDARY_ALIGNED_CJ = "BoundaryEqualityWithAlignedCJ"
ZERO_MASS = "ZeroMass"

# m^2 is a difference of quartic roots, so m itself is only good to ~sqrt(eps)
ZERO_MASS_TOL = 1e-6


def _spatial_bivectors(gammas):
    # (i/2) eps_{mkl} g_k g_l for m = 1, 2, 3
    out = []
    for m in range(3):
        X = np.zeros((4, 4), dtype=complex)
        for k in range(3):
            for l in range(3):
                if EPS[m, k, l]:
                    X += 0.5j * EPS[m, k, l] * gammas[k] @ gammas[l]
        out.append(X)
    return out


_G = GAMMAS[1:]
_Q_P = [-GAMMA0 @ g for g in _G]
_Q_C = [1j * g for g in _G]
_Q_J = [GAMMA0 @ X for X in _spatial_bivectors(_G)]

_J_P = [-g for g in _G]
_J_C = [1j * GAMMA0 @ g for g in _G]
_J_J = _spatial_bivectors(_G)


def _combine(scalar_op, vec_ops, mu: ConservedCharges):
    X = mu.e * scalar_op
    for coeffs, ops in zip((mu.p, mu.c, mu.j), vec_ops):
        for a, op in zip(coeffs, ops):
            X = X + a * op
    return X


@dataclass
class EnergyMatrix:
    Q: np.ndarray
    eigenvalues: np.ndarray

    def to_json(self) -> dict:
        return {"Q": [[[float(z.real), float(z.imag)] for z in row] for row in self.Q],
                "eigenvalues": [float(x) for x in self.eigenvalues]}


def energy_matrix(mu: ConservedCharges) -> EnergyMatrix:
    """Q = e - p_j g0 g_j + c_k i g_k + j_m (i/2) eps_{mkl} g0 g_k g_l."""
    Q = _combine(np.eye(4, dtype=complex), (_Q_P, _Q_C, _Q_J), mu)
    return EnergyMatrix(Q, np.linalg.eigvalsh(Q))


def spinor_energy(mu: ConservedCharges, psi) -> float:
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(np.conj(psi) @ energy_matrix(mu).Q @ psi))


def sample_psd_charges(rng, margin=0.0, p_zero=False) -> ConservedCharges:
    """Gaussian p, c, j with e raised until Q has minimum eigenvalue ``margin``."""
    v = rng.normal(size=10)
    if p_zero:
        v[1:4] = 0.0
    base = ConservedCharges(0.0, v[1:4], v[4:7], v[7:10])
    # Q is e I plus a traceless part, so e shifts every eigenvalue
    return ConservedCharges(margin - energy_matrix(base).eigenvalues[0], base.p, base.c, base.j)


def check_positivity(mu: ConservedCharges, tol=1e-9):
    """(psd, min eigenvalue); the tolerance is relative to the norm of Q."""
    em = energy_matrix(mu)
    lam = float(em.eigenvalues[0])
    return lam >= -tol * max(1.0, float(np.max(np.abs(em.eigenvalues)))), lam


def casimir_traces(mu: ConservedCharges):
    """(Tr J^2 / 4, Tr J^4 / 4) for J = e g0 - p.g + c_k i g0 g_k + j_m (i/2) eps g_k g_l.

    These equal alpha and 2 alpha^2 - beta.
    """
    J = _combine(GAMMA0, (_J_P, _J_C, _J_J), mu)
    J2 = J @ J
    return float(np.trace(J2).real / 4), float(np.trace(J2 @ J2).real / 4)


# ---------------------------------------------------------------------------
# optimal observer

def _rest_frame_observer(e, c, j, tol):
    """Minimizing observer for charges with p = 0; returns (K, attained)."""
    s = max(1.0, abs(e), float(np.max(np.abs(c))), float(np.max(np.abs(j))))
    cj = np.cross(c, j)
    P = e * e - j @ j - c @ c
    R = 2.0 * float(np.linalg.norm(cj))
    if P < R - tol * s * s:
        raise Degenerate(f"P={P} < R={R}: charges outside the positivity region")
    attained = P - R > tol * s * s
    if not attained:
        # the infimum is only approached; build the optimum for a slightly
        # larger energy, which is a finite observer close to the infimum
        e = e + 1e-6 * s
        P = e * e - j @ j - c @ c
    if R <= tol * s * s:
        cos_phi = 0.0
    else:
        cos_phi = (P - np.sqrt(P * P - R * R)) / R
    sin_phi = np.sqrt(1.0 - cos_phi ** 2)
    Qphi = cos_phi ** 2 * (j @ j) + c @ c + R * cos_phi
    root = sin_phi * np.sqrt(e * e - Qphi)
    eta = np.sqrt(Qphi) / root  # |C|
    A = e / root
    d = eta * cos_phi  # |D|
    if R > tol * s * s:
        n = cj / np.linalg.norm(cj)
        w = eta * c + d * np.cross(j, n)
        u = -w / np.linalg.norm(w)
        C = eta * u
        D = d * np.cross(n, u)
        B = A * np.cross(D, C) / (eta * eta)
    else:
        nc = np.linalg.norm(c)
        C = -eta * c / nc if nc > 0 else np.zeros(3)
        B = np.zeros(3)
        D = np.zeros(3)
    return KillingField(A, B, C, D), bool(attained)


def optimal_observer(mu: ConservedCharges, tol=1e-9):
    """An observer field minimizing pair(mu, .), and whether the minimum is attained.

    Works in the rest frame of (e, p): there the minimizer has C, D in the
    plane of c, j (same orientation), B orthogonal to both, and the angle
    parameter phi fixed by cos phi = (P - sqrt(P^2 - R^2)) / R.
    """
    rest, g = boost_to_rest_frame(mu)
    K, attained = _rest_frame_observer(rest.e, rest.c, rest.j, tol)
    # pair(Ad*_g mu, K) = pair(mu, Ad_{g^-1} K)
    return adjoint_action(group_inverse(g), K), attained


def jd_cosine(e, c, j, tol=1e-9):
    """cos of the angle from j to D at the optimum, from the closed form."""
    K, _ = _rest_frame_observer(e, c, j, tol)
    eta, d = np.linalg.norm(K.C), np.linalg.norm(K.D)
    nj, nc = np.linalg.norm(j), np.linalg.norm(c)
    cross = np.linalg.norm(np.cross(j, c))
    sin0 = cross / (nj * nc)
    denom = np.sqrt(d * d * nj * nj + eta * eta * nc * nc + 2 * eta * d * cross)
    return -(d * nj + eta * nc * abs(sin0)) / denom


# ---------------------------------------------------------------------------
# rest mass

@dataclass
class MassReport:
    m: float
    alpha: float
    beta: float
    optimal_observer: KillingField | None
    attained: bool
    rigidity_flags: set = field(default_factory=set)
    q_min_eigenvalue: float = 0.0

    def to_json(self) -> dict:
        return {"m": self.m, "alpha": self.alpha, "beta": self.beta, "attained": self.attained,
                "optimal_observer": None if self.optimal_observer is None else self.optimal_observer.to_json(),
                "flags": sorted(self.rigidity_flags), "q_min_eigenvalue": self.q_min_eigenvalue}


def mass_from_invariants(alpha, beta) -> float:
    return float(np.sqrt(max(0.5 * (alpha + np.sqrt(max(beta, 0.0))), 0.0)))


def _require_psd(mu, tol):
    psd, lam = check_positivity(mu, tol)
    if not psd:
        raise NotPositive("energy matrix is not positive semi-definite", q_min_eigenvalue=lam)
    return lam


def rest_mass(mu: ConservedCharges, tol=1e-9) -> MassReport:
    lam = _require_psd(mu, tol)
    inv = invariants(mu)
    m = mass_from_invariants(inv.alpha, inv.beta)
    s = mu.scale()
    flags = set()
    pn = float(np.linalg.norm(mu.p))
    if abs(mu.e - pn) <= tol * s:
        flags.add(NULL_ENERGY_MOMENTUM)
    if m * m <= ZERO_MASS_TOL * s * s:
        flags.add(ZERO_MASS)
    K, attained = None, False
    if mu.e > pn + tol * s:
        rest, _ = boost_to_rest_frame(mu)
        e, c, j = rest.e, rest.c, rest.j
        bound = np.sqrt(c @ c + j @ j + 2 * np.linalg.norm(np.cross(c, j)))
        if abs(e - bound) <= 1e-8 * s and np.linalg.norm(np.cross(c, j)) <= 1e-8 * s * s:
            flags.add(BOUNDARY_ALIGNED_CJ)
        try:
            K, attained = optimal_observer(mu, tol)
        except Degenerate:
            K, attained = None, False
    return MassReport(m, inv.alpha, inv.beta, K, attained, flags, lam)


# ---------------------------------------------------------------------------
# numeric oracle

def _observers_from_BC(B, C):
    """Vectorized observer chart: rows of B, C -> (A, D)."""
    cr = np.cross(B, C)
    s = 1.0 + np.sum(B * B, -1) + np.sum(C * C, -1)
    A = np.sqrt(0.5 * (s + np.sqrt(np.maximum(s * s - 4.0 * np.sum(cr * cr, -1), 0.0))))
    return A, -cr / A[..., None]


def _decompress(z):
    # radial sinh stretch: reaches large |B|, |C| from a bounded box
    z = np.atleast_2d(z)
    B, C = z[:, :3], z[:, 3:]
    out = []
    for v in (B, C):
        r = np.linalg.norm(v, axis=-1, keepdims=True)
        out.append(np.where(r > 0, v * np.sinh(r) / np.where(r > 0, r, 1.0), v))
    return out


def _energies(mu, z):
    B, C = _decompress(z)
    A, D = _observers_from_BC(B, C)
    return mu.e * A + B @ mu.p + C @ mu.c + D @ mu.j


def rest_mass_numeric(mu: ConservedCharges, budget=10_000, seed=0, refine=1, tol=1e-9) -> float:
    """Sampled infimum of pair(mu, K) over observer fields.

    Observers are parametrized by (B, C) in R^6, which determines A and D.
    ``budget`` random points in a sinh-stretched ball are scored and the
    ``refine`` best are polished with Nelder-Mead.
    """
    _require_psd(mu, tol)
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(budget, 6))
    z *= (6.0 * rng.uniform(size=(budget, 1)) ** (1 / 6)) / np.linalg.norm(z, axis=1, keepdims=True)
    vals = _energies(mu, z)
    best = float(vals.min())
    f = lambda x: float(_energies(mu, x)[0])  # noqa: E731
    for i in np.argsort(vals, kind="stable")[:refine]:
        x = z[i]
        for _ in range(2):  # a restart shakes the simplex loose
            res = minimize(f, x, method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-14, "maxfev": 3000})
            x = res.x
        best = min(best, float(res.fun))
    return best
