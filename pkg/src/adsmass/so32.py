"""The Lie algebra so(3,2) in (A, B, C, D) coordinates and its dual.

Ambient coordinates are ordered (y0, y1, y2, y3, y4) with metric
eta = diag(-1, 1, 1, 1, -1); AdS is the quadric eta(y, y) = -1.

A Killing field K = (A, B, C, D) acts on the ambient space as y -> M y with

    M[4,0] = A,  M[0,4] = -A,
    M[0,i] = M[i,0] = B_i,
    M[4,i] = M[i,4] = C_i,
    M[r,q] = sum_p D_p eps_{pqr}        (spatial q, r)

so that A generates time translation, B the boosts mixing y0 with y_i,
C the boosts mixing y4 with y_i and D the spatial rotations.

Conserved charges mu = (e, p, c, j) pair with fields through
``pair(mu, K) = e A + p.B + c.C + j.D``.

Bracket convention: ``bracket(K1, K2)`` is the matrix commutator
M1 M2 - M2 M1.  The vector-field bracket is its negative; every invariant
used downstream (Tr ad^2, Tr ad^4) is even in ad, so nothing depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np
from scipy.linalg import expm

from .errors import NotInAlgebra, NotInGroup, NotTimelikeEnergyMomentum

ETA = np.diag([-1.0, 1.0, 1.0, 1.0, -1.0])

EPS = np.zeros((3, 3, 3))
for _perm in itertools.permutations(range(3)):
    EPS[_perm] = np.linalg.det(np.eye(3)[list(_perm)])


def _vec3(x, name):
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
    return v


class _TenVector:
    """Shared behaviour for the two 1 + 3 + 3 + 3 coordinate records."""

    _fields: tuple[str, str, str, str] = ()

    def __post_init__(self):
        s, *vs = self._fields
        object.__setattr__(self, s, float(getattr(self, s)))
        for name in vs:
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        if not np.all(np.isfinite(self.vector)):
            raise ValueError(f"non-finite entries in {type(self).__name__}")

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([[getattr(self, self._fields[0])]] + [getattr(self, n) for n in self._fields[1:]])

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.shape != (10,):
            raise ValueError(f"expected 10 coordinates, got {v.shape}")
        return cls(v[0], v[1:4], v[4:7], v[7:10])

    @classmethod
    def zero(cls):
        return cls.from_vector(np.zeros(10))

    def scale(self) -> float:
        """Magnitude used to scale tolerances: max(1, max |entry|)."""
        return max(1.0, float(np.max(np.abs(self.vector))))

    def to_json(self) -> dict:
        s, *vs = self._fields
        out = {s: getattr(self, s)}
        for name in vs:
            out[name] = [float(x) for x in getattr(self, name)]
        return out

    @classmethod
    def from_json(cls, obj):
        s, *vs = cls._fields
        try:
            return cls(obj[s], *(obj[n] for n in vs))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed {cls.__name__} JSON: {exc}") from exc

    def allclose(self, other, atol=1e-12) -> bool:
        return bool(np.allclose(self.vector, other.vector, rtol=0.0, atol=atol))

    def __add__(self, other):
        return type(self).from_vector(self.vector + other.vector)

    def __sub__(self, other):
        return type(self).from_vector(self.vector - other.vector)

    def __neg__(self):
        return type(self).from_vector(-self.vector)

    def __mul__(self, k):
        return type(self).from_vector(float(k) * self.vector)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return type(self).from_vector(self.vector / float(k))

    def __iter__(self):
        return (getattr(self, n) for n in self._fields)

    def __repr__(self):
        s, *vs = self._fields
        parts = [f"{s}={getattr(self, s)!r}"] + [f"{n}={getattr(self, n).tolist()}" for n in vs]
        return f"{type(self).__name__}({', '.join(parts)})"


@dataclass(frozen=True, eq=False, repr=False)
class KillingField(_TenVector):
    A: float
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    _fields = ("A", "B", "C", "D")


@dataclass(frozen=True, eq=False, repr=False)
class ConservedCharges(_TenVector):
    e: float
    p: np.ndarray
    c: np.ndarray
    j: np.ndarray

    _fields = ("e", "p", "c", "j")


@dataclass(frozen=True)
class InvariantPair:
    alpha: float
    beta: float


# ---------------------------------------------------------------------------
# matrix representation

def to_matrix(K: KillingField) -> np.ndarray:
    M = np.zeros((5, 5))
    M[4, 0] = K.A
    M[0, 4] = -K.A
    M[0, 1:4] = M[1:4, 0] = K.B
    M[4, 1:4] = M[1:4, 4] = K.C
    # M[r, q] = D_p eps_{pqr}
    M[1:4, 1:4] = np.einsum("p,pqr->rq", K.D, EPS)
    return M


def is_algebra_matrix(M, tol=1e-10) -> bool:
    S = np.asarray(M) @ ETA
    return bool(np.max(np.abs(S + S.T)) <= tol * max(1.0, np.max(np.abs(M))))


def from_matrix(M, tol=1e-10) -> KillingField:
    M = np.asarray(M, dtype=float)
    if M.shape != (5, 5) or not is_algebra_matrix(M, tol):
        raise NotInAlgebra("M eta is not antisymmetric")
    D = 0.5 * np.einsum("pqr,rq->p", EPS, M[1:4, 1:4])
    return KillingField(M[4, 0], M[0, 1:4], M[4, 1:4], D)


def bracket(K1: KillingField, K2: KillingField) -> KillingField:
    M1, M2 = to_matrix(K1), to_matrix(K2)
    return from_matrix(M1 @ M2 - M2 @ M1)


def killing_form(K1: KillingField, K2: KillingField) -> float:
    return 6.0 * (-K1.A * K2.A - K1.D @ K2.D + K1.B @ K2.B + K1.C @ K2.C)


def pair(mu: ConservedCharges, K: KillingField) -> float:
    return float(mu.e * K.A + mu.p @ K.B + mu.c @ K.C + mu.j @ K.D)


_BASIS = [KillingField.from_vector(row) for row in np.eye(10)]
_BASIS_MATRICES = np.array([to_matrix(E) for E in _BASIS])


def _matrix_to_vector(M):
    # same read-off as from_matrix, without the membership check
    D = 0.5 * np.einsum("pqr,...rq->...p", EPS, M[..., 1:4, 1:4])
    return np.concatenate([M[..., 4, 0][..., None], M[..., 0, 1:4], M[..., 4, 1:4], D], axis=-1)


def ad_matrix(K: KillingField) -> np.ndarray:
    """Matrix of L -> bracket(K, L) in the basis (A, B1..B3, C1..C3, D1..D3)."""
    M = to_matrix(K)
    comm = M @ _BASIS_MATRICES - _BASIS_MATRICES @ M
    return _matrix_to_vector(comm).T


def charges_to_field(mu: ConservedCharges) -> KillingField:
    """The field K with killing_form(K, L) / 6 == pair(mu, L) for every L.

    The sign pattern (-e, p, c, -j) follows from the coordinate form of the
    Killing form; tests re-derive it by solving the 10 linear equations.
    """
    return KillingField(-mu.e, mu.p, mu.c, -mu.j)


def invariants(mu: ConservedCharges) -> InvariantPair:
    e, p, c, j = mu
    alpha = e * e + j @ j - p @ p - c @ c
    beta = ((e * e - j @ j - p @ p - c @ c) ** 2
            - 4 * np.sum(np.cross(j, p) ** 2)
            - 4 * np.sum(np.cross(p, c) ** 2)
            - 4 * np.sum(np.cross(c, j) ** 2)
            + 8 * e * (c @ np.cross(p, j)))
    return InvariantPair(float(alpha), float(beta))


def invariants_via_ad(mu: ConservedCharges) -> InvariantPair:
    ad = ad_matrix(charges_to_field(mu))
    ad2 = ad @ ad
    t2 = np.trace(ad2)
    t4 = np.trace(ad2 @ ad2)
    return InvariantPair(float(-t2 / 6.0), float(-t4 / 3.0 + t2 * t2 / 12.0))


# ---------------------------------------------------------------------------
# group

def is_group_element(g, tol=1e-10) -> bool:
    g = np.asarray(g, dtype=float)
    if g.shape != (5, 5):
        return False
    err = np.max(np.abs(g.T @ ETA @ g - ETA))
    return bool(err <= tol * max(1.0, np.max(np.abs(g)) ** 2))


def group_exp(K: KillingField, t: float = 1.0) -> np.ndarray:
    return expm(t * to_matrix(K))


def group_inverse(g) -> np.ndarray:
    return ETA @ np.asarray(g).T @ ETA


def _check_group(g, tol):
    if not is_group_element(g, tol):
        raise NotInGroup("g^T eta g != eta")


def adjoint_matrix(g, tol=1e-10) -> np.ndarray:
    """10x10 matrix of K -> Ad_g K."""
    _check_group(g, tol)
    g = np.asarray(g, dtype=float)
    conj = g @ _BASIS_MATRICES @ group_inverse(g)
    return _matrix_to_vector(conj).T


def adjoint_action(g, K: KillingField, tol=1e-10) -> KillingField:
    return KillingField.from_vector(adjoint_matrix(g, tol) @ K.vector)


def coadjoint_action(g, mu: ConservedCharges, tol=1e-10) -> ConservedCharges:
    """Ad*_g mu, defined by pair(Ad*_g mu, K) = pair(mu, Ad_{g^-1} K)."""
    g = np.asarray(g, dtype=float)
    _check_group(g, tol)
    return ConservedCharges.from_vector(adjoint_matrix(group_inverse(g), tol).T @ mu.vector)


def boost_to_rest_frame(mu: ConservedCharges, tol=1e-12):
    """Return (mu', g) with mu' = Ad*_g mu and p' = 0.

    The boost mixing y4 with the y direction along p (a C generator) rotates
    (e, p) hyperbolically and leaves the transverse momentum alone; its
    parameter is located by bisection on the sign of p'.p_hat.
    """
    e, p = mu.e, mu.p
    pn = float(np.linalg.norm(p))
    scale = abs(e) + pn
    if e <= pn + 1e-12 * max(1.0, scale):
        raise NotTimelikeEnergyMomentum(f"e={e} must exceed |p|={pn}")
    if pn == 0.0:
        return mu, np.eye(5)
    n = p / pn
    gen = KillingField(0.0, np.zeros(3), n, np.zeros(3))

    def residual(t):
        return coadjoint_action(group_exp(gen, t), mu).p @ n

    # the rapidity needed is atanh(|p|/e); bracket generously around it
    hi = np.arctanh(min(pn / e, 1 - 1e-16)) + 1.0
    lo, hi = -hi, hi
    flo, fhi = residual(lo), residual(hi)
    if flo * fhi > 0:
        raise NotTimelikeEnergyMomentum("could not bracket the rest-frame boost")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = residual(mid)
        if fm == 0.0 or hi - lo < tol:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    g = group_exp(gen, 0.5 * (lo + hi))
    return coadjoint_action(g, mu), g


def random_group_element(rng, factors=5, spread=1.0) -> np.ndarray:
    """Product of one-parameter exponentials; lies in the identity component."""
    g = np.eye(5)
    for _ in range(factors):
        K = KillingField.from_vector(rng.uniform(-1, 1, 10))
        g = g @ group_exp(K, spread * rng.uniform(-1, 1))
    return g
