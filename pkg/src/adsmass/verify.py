"""Seeded invariant suites behind ``adsmass verify``.

Each suite returns a list of ``Check`` rows: a name, the worst residual
seen and the threshold it was held to.  Sample counts above the fixed
sizes of the slow checks are capped so the full run stays quick.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import clifford as cl
from . import geometry as geo
from . import killing_sets as ks
from . import mass as rm
from . import so32


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    # for checks where larger is better (margins), compare the other way
    at_least: bool = False

    @property
    def passed(self) -> bool:
        r = self.residual
        if not np.isfinite(r):
            return False
        return bool(r >= self.tol if self.at_least else r <= self.tol)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": float(self.residual),
                "tol": self.tol, "at_least": self.at_least}


def _rng(seed, salt):
    return np.random.default_rng([seed, salt])


def _random_spinor(rng):
    return rng.normal(size=4) + 1j * rng.normal(size=4)


# ---------------------------------------------------------------------------

def suite_clifford(seed=0, samples=1000):
    rng = _rng(seed, 1)
    witness = cl.spinor_to_killing([1, 0, 1 + 1j, 0])
    contraction = in_set = preimage = 0.0
    for i in range(samples):
        psi = _random_spinor(rng)
        bl = cl.spinor_bilinears(psi)
        K = cl.spinor_to_killing(psi)
        s2 = K.scale() ** 2
        contraction = max(contraction, max(abs(v) for v in bl.contraction_residuals().values()) / s2)
        rep = ks.is_spinor_killing(K)
        in_set = max(in_set, _membership_excess(rep))
        if i < min(samples, 100):
            back = cl.spinor_to_killing(cl.spinor_preimage(K))
            preimage = max(preimage, float(np.max(np.abs(back.vector - K.vector))) / K.scale())
    return [
        Check("clifford relations", cl.clifford_relation_residual(), 1e-15),
        Check("fierz identity", cl.verify_fierz(), 1e-13),
        Check("witness spinor image", float(np.max(np.abs(witness.vector - ks.WITNESS.vector))), 1e-12),
        Check("contraction identities", contraction, 1e-9),
        Check("images in the spinor field set", in_set, 1e-9),
        Check("preimage round trip", preimage, 1e-8),
    ]


def _membership_excess(rep):
    """How far a report is from membership: 0 when every residual is in tolerance."""
    worst = 0.0
    for name, v in rep.residuals.items():
        if name in rep.strict or ">=" in name or name == "dot_product_sign":
            worst = max(worst, -v)
        else:
            worst = max(worst, abs(v))
    return worst


def suite_algebra(seed=0, samples=1000):
    rng = _rng(seed, 2)
    killing = inv = 0.0
    for _ in range(samples):
        K = so32.KillingField.from_vector(rng.normal(size=10))
        closed = so32.killing_form(K, K)
        ad = so32.ad_matrix(K)
        M = so32.to_matrix(K)
        s = K.scale() ** 2
        killing = max(killing, abs(closed - np.trace(ad @ ad)) / s, abs(closed - 3 * np.trace(M @ M)) / s)
        mu = so32.ConservedCharges.from_vector(rng.normal(size=10))
        a, b = so32.invariants(mu), so32.invariants_via_ad(mu)
        inv = max(inv, abs(a.alpha - b.alpha) / max(1.0, abs(a.alpha)), abs(a.beta - b.beta) / max(1.0, abs(a.beta)))
    coad = 0.0
    mu = so32.ConservedCharges.from_vector(rng.normal(size=10))
    a = so32.invariants(mu)
    for _ in range(min(samples, 100)):
        b = so32.invariants(so32.coadjoint_action(so32.random_group_element(rng), mu))
        coad = max(coad, abs(a.alpha - b.alpha) / max(1.0, abs(a.alpha)), abs(a.beta - b.beta) / max(1.0, abs(a.beta)))
    # the dual map: killing_form(charges_to_field(mu), L) / 6 = pair(mu, L)
    dual = 0.0
    K = so32.charges_to_field(mu)
    for L in so32._BASIS:
        dual = max(dual, abs(so32.killing_form(K, L) / 6 - so32.pair(mu, L)))
    jac = 0.0
    for _ in range(min(samples, 100)):
        X, Y, Z = (so32.KillingField.from_vector(rng.normal(size=10)) for _ in range(3))
        br = so32.bracket
        jac = max(jac, float(np.max(np.abs((br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))).vector))))
    return [
        Check("killing form triple agreement", killing, 1e-9),
        Check("invariants closed form vs traces", inv, 1e-8),
        Check("invariants under coadjoint action", coad, 1e-8),
        Check("charges_to_field duality", dual, 1e-12),
        Check("jacobi identity", jac, 1e-10),
    ]


def suite_geometry(seed=0, samples=1000):
    rng = _rng(seed, 3)
    ys = geo.sample_static(rng, samples)
    quad = float(np.max(np.abs(np.einsum("ni,ij,nj->n", ys, so32.ETA, ys) + 1)))
    tangency = chart = 0.0
    for y in ys:
        K = so32.KillingField.from_vector(rng.normal(size=10))
        v = geo.eval_killing(K, y)
        tangency = max(tangency, abs(v @ so32.ETA @ y) / (K.scale() * (y @ y)))
        if abs(y[4] - 1) > 1e-6:
            back = geo.from_conformal(geo.to_conformal(y)).y
            chart = max(chart, float(np.max(np.abs(back - y))) / max(1.0, float(np.max(np.abs(y)))))
    unit = 0.0
    for i in range(20):
        unit = max(unit, abs(geo.min_norm(ks.sample_observer(_rng(seed, 100 + i)), seed=i) - 1))
    closed = 0.0
    for i in range(min(samples, 50)):
        K = ks.sample_observer(rng) * rng.uniform(0.2, 5.0)
        closed = max(closed, abs(geo.min_norm(K, seed=i) - geo.closed_form_min_norm(K)) / K.scale())
    ho_max, ratio_min = _frobenius_split(rng, min(samples, 200))
    return [
        Check("quadric", quad, 1e-12),
        Check("tangency", tangency, 1e-10),
        Check("conformal chart round trip", chart, 1e-10),
        Check("min_norm = 1 on observers", unit, 1e-5),
        Check("min_norm = closed form", closed, 1e-5),
        Check("frobenius zero when hypersurface orthogonal", ho_max, 1e-9),
        Check("frobenius residual / violation", ratio_min, 0.5, at_least=True),
    ]


def _frobenius_split(rng, n):
    """Worst residual on hypersurface-orthogonal fields, and the smallest
    ratio residual / violation on the rest, where the violation is
    |B x C + A D| / scale^2."""
    ho_max, ratio_min = 0.0, np.inf
    for i in range(n):
        K = ks.sample_observer(rng) * rng.uniform(0.2, 5.0)
        if i % 2 == 0:
            ho_max = max(ho_max, geo.frobenius_residual(K, seed=i))
            continue
        if i % 4 == 1:
            K = so32.KillingField.from_vector(rng.normal(size=10))
        else:
            K = K + so32.KillingField.from_vector(rng.normal(size=10) * 10 ** rng.uniform(-6, -1))
        viol = np.linalg.norm(np.cross(K.B, K.C) + K.A * K.D) / K.scale() ** 2
        if viol >= 1e-6:
            ratio_min = min(ratio_min, geo.frobenius_residual(K, seed=i) / viol)
    return ho_max, float(ratio_min)


def suite_sets(seed=0, samples=1000):
    rng = _rng(seed, 4)
    obs = spin = gap = rot = 0.0
    for _ in range(samples):
        K = ks.sample_observer(rng)
        obs = max(obs, _membership_excess(ks.is_observer(K, tol=1e-10)))
        gap = max(gap, -ks.causal_gap(K)[0])
        _, S = ks.sample_spinor_killing(rng)
        spin = max(spin, _membership_excess(ks.is_spinor_killing(S)))
        th = rng.uniform(0, 2 * np.pi)
        rot = max(rot, _membership_excess(ks.is_spinor_killing(ks.rotate_BC(S, th))),
                  _membership_excess(ks.is_spinor_killing(ks.permute_BCD(S))),
                  _membership_excess(ks.is_observer(ks.rotate_BC(K, th), tol=1e-10)))
    hull_err = hull_member = 0.0
    hull_lambda = np.inf
    for i in range(min(samples, 100)):
        K = ks.sample_observer(rng)
        if i % 10 == 0:
            # D = 0 branch: B parallel to C
            n = rng.normal(size=3)
            K = ks.observer_from_BC(rng.normal() * n, rng.normal() * n)
        dec = ks.hull_decompose(K)
        hull_err = max(hull_err, dec.reconstruction_error / K.scale())
        hull_lambda = min(hull_lambda, min(lam for lam, _ in dec.terms))
        hull_member = max(hull_member, max(_membership_excess(ks.is_spinor_killing(S)) for _, S in dec.terms))
    W, cert = ks.hull_witness()
    witness = max(abs(cert["gap_at_x0"]), abs(cert["min_gap"]), abs(cert["D_dot_x0"] - 2.0))
    return [
        Check("sampled observers in O", obs, 1e-10),
        Check("sampled spinor fields in S", spin, 1e-9),
        Check("causal gap nonnegative on O", gap, 1e-9),
        Check("rotate/permute preserve membership", rot, 1e-9),
        Check("hull reconstruction", hull_err, 1e-8),
        Check("hull coefficients positive", hull_lambda, 0.0, at_least=True),
        Check("hull terms in S", hull_member, 1e-9),
        Check("witness certificate", witness, 0.0),
    ]


def suite_mass(seed=0, samples=1000):
    rng = _rng(seed, 5)
    pairing = 0.0
    for _ in range(samples):
        mu = so32.ConservedCharges.from_vector(rng.normal(size=10))
        psi = _random_spinor(rng)
        pairing = max(pairing, abs(rm.spinor_energy(mu, psi) - so32.pair(mu, cl.spinor_to_killing(psi)))
                      / (mu.scale() * float(np.vdot(psi, psi).real)))
    ineq = np.inf
    for _ in range(min(samples, 200)):
        mu = rm.sample_psd_charges(rng, margin=rng.uniform(0.01, 1.0))
        inv = so32.invariants(mu)
        s4 = mu.scale() ** 4
        ineq = min(ineq, inv.alpha, inv.beta / s4, (inv.alpha ** 2 - inv.beta) / s4)
    bound = np.inf
    for _ in range(min(samples, 200)):
        mu = rm.sample_psd_charges(rng, margin=0.0, p_zero=True)
        c, j = mu.c, mu.j
        bound = min(bound, mu.e - np.sqrt(c @ c + j @ j + 2 * np.linalg.norm(np.cross(c, j))))
    cas = obs = numeric_lo = numeric_hi = boost = 0.0
    for i in range(min(samples, 50)):
        mu = rm.sample_psd_charges(rng, margin=rng.uniform(0.0, 1.0))
        inv = so32.invariants(mu)
        t2, t4 = rm.casimir_traces(mu)
        s = mu.scale()
        cas = max(cas, abs(t2 - inv.alpha) / s ** 2, abs(t4 - (2 * inv.alpha ** 2 - inv.beta)) / s ** 4)
        rep = rm.rest_mass(mu)
        if rep.optimal_observer is not None and rep.attained:
            obs = max(obs, abs(so32.pair(mu, rep.optimal_observer) - rep.m) / s,
                      _membership_excess(ks.is_observer(rep.optimal_observer, tol=1e-8)))
        g = so32.random_group_element(rng, spread=0.5)
        boost = max(boost, abs(rm.rest_mass(so32.coadjoint_action(g, mu)).m - rep.m) / s)
        if i < 5:
            mhat = rm.rest_mass_numeric(mu, seed=i)
            numeric_lo = max(numeric_lo, rep.m - mhat)
            numeric_hi = max(numeric_hi, (mhat - rep.m) / s)
    return [
        Check("spinor energy = pairing", pairing, 1e-10),
        Check("invariant inequalities margin", ineq, 0.0, at_least=True),
        Check("rest-frame energy bound", bound, -1e-9, at_least=True),
        Check("casimir traces", cas, 1e-9),
        Check("optimal observer", obs, 1e-6),
        Check("rest mass boost invariant", boost, 1e-8),
        Check("numeric infimum not below m", numeric_lo, 1e-9),
        Check("numeric infimum near m", numeric_hi, 1e-4),
    ]


SUITES = {
    "clifford": suite_clifford,
    "algebra": suite_algebra,
    "geometry": suite_geometry,
    "sets": suite_sets,
    "mass": suite_mass,
}


def run_suites(name="all", seed=0, samples=1000):
    names = list(SUITES) if name == "all" else [name]
    return {n: SUITES[n](seed=seed, samples=samples) for n in names}
