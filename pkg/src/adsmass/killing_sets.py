"""Observer and spinor Killing fields: membership, sampling and convex hulls.

Observer fields (unit, future timelike, hypersurface orthogonal) satisfy

    A D = -B x C,   A > max(|B|, |C|, |D|),   A^2 + |D|^2 - |B|^2 - |C|^2 = 1.

Spinor Killing fields (images of spinor_to_killing) are cut out by the
quadratic/quartic relations checked in ``is_spinor_killing``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BisectionFailure, DegenerateInput, NotObserver
from .so32 import KillingField


@dataclass
class MembershipReport:
    """Equality residuals must satisfy |r| <= tol; inequality entries are
    margins (lhs - rhs of a ``>=``/``>`` relation) and must be >= -tol, or
    > tol for the strict ones listed in ``strict``."""

    member: bool
    residuals: dict
    tol: float
    strict: tuple = ()

    def to_json(self) -> dict:
        return {"member": self.member, "tol": self.tol,
                "residuals": {k: float(v) for k, v in self.residuals.items()}}


def _report(equalities, inequalities, strict, tol):
    ok = all(abs(v) <= tol for v in equalities.values())
    ok &= all(v >= -tol for v in inequalities.values())
    ok &= all(v > tol for v in strict.values())
    return MembershipReport(bool(ok), {**equalities, **inequalities, **strict}, tol, tuple(strict))


def is_observer(K: KillingField, tol=1e-9) -> MembershipReport:
    """Tolerances apply to quantities scaled by max(1, max|K|)^2."""
    A, B, C, D = K
    s2 = K.scale() ** 2
    nb, nc, nd = (float(np.linalg.norm(v)) for v in (B, C, D))
    equalities = {
        "hypersurface_orthogonal": float(np.linalg.norm(A * D + np.cross(B, C))) / s2,
        "unit": (A * A + nd * nd - nb * nb - nc * nc - 1.0) / s2,
    }
    strict = {"A>|B|": A - nb, "A>|C|": A - nc, "A>|D|": A - nd}
    return _report(equalities, {}, strict, tol)


def spinor_set_residuals(K: KillingField) -> dict:
    A, B, C, D = K
    d2 = -B @ np.cross(C, D) / A
    bb, cc, dd = B @ B, C @ C, D @ D
    bc, cd, bd = B @ C, C @ D, B @ D
    return {
        "A^2": A * A - (bb + cc + dd - 2 * d2),
        "(B.C)^2": bc * bc - (bb - d2) * (cc - d2),
        "(C.D)^2": cd * cd - (cc - d2) * (dd - d2),
        "(B.D)^2": bd * bd - (bb - d2) * (dd - d2),
        "|B|^2>=Delta^2": bb - d2,
        "|C|^2>=Delta^2": cc - d2,
        "|D|^2>=Delta^2": dd - d2,
        "Delta^2>=0": d2,
        "dot_product_sign": bc * cd * bd,
    }


def is_spinor_killing(K: KillingField, tol=1e-9) -> MembershipReport:
    """Residuals are evaluated on K / max|K|, so they are dimensionless."""
    s = K.scale()
    if K.A <= tol * s:
        raise DegenerateInput("Delta^2 needs A > 0")
    r = spinor_set_residuals(K / float(np.max(np.abs(K.vector))))
    eq_keys = ("A^2", "(B.C)^2", "(C.D)^2", "(B.D)^2")
    equalities = {k: r[k] for k in eq_keys}
    inequalities = {k: v for k, v in r.items() if k not in eq_keys}
    return _report(equalities, inequalities, {}, tol)


def rotate_BC(K: KillingField, theta: float) -> KillingField:
    c, s = np.cos(theta), np.sin(theta)
    return KillingField(K.A, c * K.B + s * K.C, -s * K.B + c * K.C, K.D)


def permute_BCD(K: KillingField) -> KillingField:
    return KillingField(K.A, K.C, K.D, K.B)


# ---------------------------------------------------------------------------
# samplers

def observer_from_BC(B, C) -> KillingField:
    """The unique observer field with the given B and C.

    A^2 is the larger root of A^4 - (1 + |B|^2 + |C|^2) A^2 + |B x C|^2 = 0
    and D = -B x C / A.
    """
    B, C = np.asarray(B, dtype=float), np.asarray(C, dtype=float)
    cr = np.cross(B, C)
    s = 1.0 + B @ B + C @ C
    A = np.sqrt(0.5 * (s + np.sqrt(max(s * s - 4.0 * (cr @ cr), 0.0))))
    return KillingField(A, B, C, -cr / A)


def _ball(rng, radius):
    v = rng.normal(size=3)
    return radius * rng.uniform() ** (1 / 3) * v / np.linalg.norm(v)


def sample_observer(seed, radius=1.5) -> KillingField:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        K = observer_from_BC(_ball(rng, radius), _ball(rng, radius))
        if K.A > max(np.linalg.norm(K.B), np.linalg.norm(K.C), np.linalg.norm(K.D)) + 1e-9:
            return K


def sample_spinor_killing(seed):
    from .clifford import spinor_to_killing

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    return psi, spinor_to_killing(psi)


# ---------------------------------------------------------------------------
# causal gap and hull

def causal_gap(K: KillingField):
    """min over unit x of A^2 - (B.x)^2 - (C.x)^2 - (D.x)^2, with its argmin."""
    A, B, C, D = K
    S = np.outer(B, B) + np.outer(C, C) + np.outer(D, D)
    w, V = np.linalg.eigh(S)
    x = V[:, -1]
    # fix the eigenvector sign for reproducible output
    x = x * np.sign(x[np.argmax(np.abs(x))])
    return float(A * A - w[-1]), x


@dataclass
class HullDecomposition:
    terms: list = field(default_factory=list)  # (weight, KillingField)
    reconstruction_error: float = 0.0

    def total(self) -> KillingField:
        out = KillingField.zero()
        for lam, S in self.terms:
            out = out + lam * S
        return out

    def to_json(self) -> dict:
        return {"terms": [{"lambda": lam, "S": S.to_json()} for lam, S in self.terms],
                "reconstruction_error": self.reconstruction_error}


def _bisect(f, lo, hi, tol=1e-12, max_iter=200):
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BisectionFailure(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hull_decompose(K: KillingField, tol=1e-9) -> HullDecomposition:
    """Write an observer field as a positive combination of spinor fields.

    With D = 0, B and C share an axis and K splits into two null rays.
    Otherwise, in the frame e1 = B/|B|, e3 = D/|D|, K = (A, (b,0,0),
    (c1,c2,0), (0,0,d)) with A d = -b c2, and we peel off a spinor field
    (A - a, B, C, d' e3) where d' in (d, b] solves

        (b c2 / d')^2 = b^2 + c1^2 + c2^2 - d'^2,      A - a = -b c2 / d'.

    The remainder a (1, 0, 0, (d - d')/a e3) is timelike and splits into
    the two null spinor fields along +-e3.
    """
    report = is_observer(K, tol)
    if not report.member:
        raise NotObserver("hull_decompose needs an observer field", residuals=report.residuals)
    A, B, C, D = K
    terms = []
    dn = float(np.linalg.norm(D))
    if dn <= tol * K.scale():
        axis = B if np.linalg.norm(B) >= np.linalg.norm(C) else C
        na = np.linalg.norm(axis)
        n = axis / na if na > 0 else np.array([1.0, 0.0, 0.0])
        # project onto the common axis; B x C = -A D vanishes here
        beta, gam = B @ n, C @ n
        r = float(np.hypot(beta, gam))
        if r > 0:
            ray = KillingField(1.0, beta / r * n, gam / r * n, np.zeros(3))
        else:
            ray = KillingField(1.0, n, np.zeros(3), np.zeros(3))
        terms = [(0.5 * (A + r), ray), (0.5 * (A - r), KillingField(1.0, -ray.B, -ray.C, np.zeros(3)))]
    else:
        b = float(np.linalg.norm(B))
        e1 = B / b
        e3 = D / dn
        e2 = np.cross(e3, e1)
        c1, c2, d = C @ e1, C @ e2, dn

        def g(dp):
            return (b * c2 / dp) ** 2 - (b * b + c1 * c1 + c2 * c2) + dp * dp

        dp = _bisect(g, d, b)
        A_s = -b * c2 / dp
        a = A - A_s
        x = d - dp  # = a * e, with |e| < 1
        spinor_part = KillingField(A_s, B, C, dp * e3)
        terms = [(1.0, spinor_part),
                 (0.5 * (a + x), KillingField(1.0, np.zeros(3), np.zeros(3), e3)),
                 (0.5 * (a - x), KillingField(1.0, np.zeros(3), np.zeros(3), -e3))]
    dec = HullDecomposition(terms)
    dec.reconstruction_error = float(np.max(np.abs(dec.total().vector - K.vector)))
    return dec


WITNESS = KillingField(3.0, [-1.0, 0.0, 0.0], [-2.0, 0.0, 0.0], [2.0, 0.0, 0.0])


def hull_witness():
    """A spinor field outside the convex hull of the observer fields.

    Every observer field has non-negative causal gap, and a positive
    combination can only reach zero gap at x0 if each term does, which
    forces D.x0 = 0 term by term.  The witness has zero gap at x0 but
    D.x0 = 2.
    """
    x0 = np.array([1.0, 0.0, 0.0])
    A, B, C, D = WITNESS
    gap_at_x0 = A * A - (B @ x0) ** 2 - (C @ x0) ** 2 - (D @ x0) ** 2
    gap, argmin = causal_gap(WITNESS)
    cert = {"x0": x0.tolist(), "gap_at_x0": float(gap_at_x0), "min_gap": gap,
            "argmin": argmin.tolist(), "D_dot_x0": float(D @ x0)}
    return WITNESS, cert
