"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with the measured value and the
threshold; the lines are printed in the pytest terminal summary, or
directly when this file is run as a script.
"""

import time

import numpy as np

from adsmass import clifford as cl
from adsmass import geometry as geo
from adsmass import killing_sets as ks
from adsmass import mass as rm
from adsmass import so32

RESULTS: list[str] = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _excess(rep):
    # distance from membership: 0 when all residuals are within tolerance
    worst = 0.0
    for name, v in rep.residuals.items():
        one_sided = name in rep.strict or ">=" in name or name == "dot_product_sign"
        worst = max(worst, -v if one_sided else abs(v))
    return worst


def _spinor(rng):
    return rng.normal(size=4) + 1j * rng.normal(size=4)


def test_01_witness_map():
    K = cl.spinor_to_killing([1, 0, 1 + 1j, 0])
    target = so32.KillingField(3, [-1, 0, 0], [-2, 0, 0], [2, 0, 0])
    err = float(np.max(np.abs(K.vector - target.vector)))
    record(1, "witness spinor image", err <= 1e-12, f"error {err:.2e} <= 1e-12")


def test_02_fierz():
    t0 = time.perf_counter()
    r = cl.verify_fierz()
    dt = time.perf_counter() - t0
    record(2, "fierz identity over 256 tuples", r <= 1e-13 and dt < 1, f"residual {r:.2e} <= 1e-13, {dt:.2f}s < 1s")


def test_03_contraction_identities():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    contraction = in_set = 0.0
    for _ in range(1000):
        psi = _spinor(rng)
        K = cl.spinor_to_killing(psi)
        s2 = K.scale() ** 2
        res = cl.spinor_bilinears(psi).contraction_residuals()
        assert len(res) == 8
        contraction = max(contraction, max(abs(v) for v in res.values()) / s2)
        in_set = max(in_set, _excess(ks.is_spinor_killing(K)))
    dt = time.perf_counter() - t0
    ok = contraction <= 1e-9 and in_set <= 1e-9 and dt < 5
    record(3, "contraction identities and set membership", ok,
           f"contraction {contraction:.2e}, membership {in_set:.2e} <= 1e-9, {dt:.2f}s < 5s")


def test_04_killing_form_triple():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        K = so32.KillingField.from_vector(rng.normal(size=10))
        closed = so32.killing_form(K, K)
        ad, M = so32.ad_matrix(K), so32.to_matrix(K)
        worst = max(worst, abs(closed - np.trace(ad @ ad)), abs(closed - 3 * np.trace(M @ M)))
    record(4, "killing form closed form / Tr ad^2 / 3 Tr M^2", worst <= 1e-9, f"max gap {worst:.2e} <= 1e-9")


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_05_invariants():
    rng = np.random.default_rng(5)
    traces = 0.0
    for _ in range(1000):
        mu = so32.ConservedCharges.from_vector(rng.normal(size=10))
        a, b = so32.invariants(mu), so32.invariants_via_ad(mu)
        traces = max(traces, _rel(a.alpha, b.alpha), _rel(a.beta, b.beta))
    mu = so32.ConservedCharges.from_vector(rng.normal(size=10))
    a = so32.invariants(mu)
    orbit = 0.0
    for _ in range(100):
        b = so32.invariants(so32.coadjoint_action(so32.random_group_element(rng), mu))
        orbit = max(orbit, _rel(a.alpha, b.alpha), _rel(a.beta, b.beta))
    record(5, "invariants: traces vs closed form, coadjoint invariance", traces <= 1e-8 and orbit <= 1e-8,
           f"traces {traces:.2e}, orbit {orbit:.2e} <= 1e-8 relative")


def test_06_rest_mass():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    below = above = observer = 0.0
    for i in range(50):
        mu = rm.sample_psd_charges(rng, margin=rng.uniform(0.0, 1.0))
        m = rm.rest_mass(mu).m
        mhat = rm.rest_mass_numeric(mu, budget=10_000, seed=i)
        below = max(below, m - mhat)
        above = max(above, (mhat - m) / mu.scale())
        K, _ = rm.optimal_observer(mu)
        observer = max(observer, abs(so32.pair(mu, K) - m))
    dt = time.perf_counter() - t0
    C = so32.ConservedCharges
    specific = [
        (C(2, [0, 0, 0], [0, 0, 0], [0, 0, 0]), 2.0),
        (C(5, [0, 0, 0], [1, 0, 0], [0, 2, 0]), np.sqrt(0.5 * (28 + np.sqrt(384)))),
        (C(3, [0, 0, 0], [1, 0, 0], [0, 2, 0]), np.sqrt(6)),
    ]
    values = max(abs(rm.rest_mass(mu).m - m) for mu, m in specific)
    ok = below <= 1e-9 and above <= 1e-4 and observer <= 1e-6 and values <= 1e-12 and dt < 30
    record(6, "rest mass: numeric bracket, optimal observer, exact values", ok,
           f"m - m_num {below:.2e} <= 1e-9, (m_num - m)/scale {above:.2e} <= 1e-4, "
           f"observer {observer:.2e} <= 1e-6, values {values:.2e}, {dt:.1f}s < 30s")


def test_07_geometry():
    unit = 0.0
    for seed in range(20):
        unit = max(unit, abs(geo.min_norm(ks.sample_observer(seed), seed=seed) - 1))
    # residual vanishes exactly when B x C + A D does, and otherwise grows with it
    rng = np.random.default_rng(7)
    zero_side, ratio = 0.0, np.inf
    for i in range(200):
        K = ks.sample_observer(rng) * rng.uniform(0.2, 5.0)
        if i % 2:
            K = K + so32.KillingField.from_vector(rng.normal(size=10) * 10 ** rng.uniform(-6, 0))
        viol = np.linalg.norm(np.cross(K.B, K.C) + K.A * K.D) / K.scale() ** 2
        r = geo.frobenius_residual(K, seed=i)
        if viol <= 1e-12:
            zero_side = max(zero_side, r)
        else:
            ratio = min(ratio, r / viol)
    ok = unit <= 1e-5 and zero_side <= 1e-9 and ratio >= 0.5
    record(7, "min_norm on observers, frobenius correspondence", ok,
           f"|min_norm - 1| {unit:.2e} <= 1e-5, residual when orthogonal {zero_side:.2e} <= 1e-9, "
           f"min residual/violation {ratio:.2f} >= 0.5")


def test_08_hull():
    err = member = 0.0
    lam = np.inf
    for seed in range(100):
        K = ks.sample_observer(seed)
        dec = ks.hull_decompose(K)
        err = max(err, dec.reconstruction_error / K.scale())
        lam = min(lam, min(c for c, _ in dec.terms))
        member = max(member, max(_excess(ks.is_spinor_killing(S)) for _, S in dec.terms))
    _, cert = ks.hull_witness()
    exact = cert["gap_at_x0"] == 0.0 and cert["D_dot_x0"] == 2.0
    ok = err <= 1e-8 and lam > 0 and member <= 1e-9 and exact
    record(8, "hull decomposition and witness certificate", ok,
           f"round trip {err:.2e} <= 1e-8, min coefficient {lam:.3f} > 0, membership {member:.2e}, "
           f"gap {cert['gap_at_x0']}, D.x0 {cert['D_dot_x0']}")


def test_09_positivity():
    rng = np.random.default_rng(9)
    ineq = True
    for _ in range(200):
        mu = rm.sample_psd_charges(rng, margin=rng.uniform(0.011, 1.0))
        inv = so32.invariants(mu)
        ineq &= rm.check_positivity(mu)[1] > 0.01 and inv.alpha > 0 and 0 < inv.beta < inv.alpha ** 2
    slack = np.inf
    for _ in range(200):
        mu = rm.sample_psd_charges(rng, margin=0.0, p_zero=True)
        c, j = mu.c, mu.j
        slack = min(slack, mu.e - np.sqrt(c @ c + j @ j + 2 * np.linalg.norm(np.cross(c, j))))
    record(9, "invariant inequalities and rest-frame energy bound", bool(ineq) and slack >= -1e-9,
           f"inequalities hold: {bool(ineq)}, min slack {slack:.2e} >= -1e-9")


def test_10_preimage():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(100):
        K = cl.spinor_to_killing(_spinor(rng))
        back = cl.spinor_to_killing(cl.spinor_preimage(K))
        worst = max(worst, float(np.max(np.abs(back.vector - K.vector))) / K.scale())
    record(10, "spinor preimage round trip", worst <= 1e-8, f"{worst:.2e} <= 1e-8 * scale")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
