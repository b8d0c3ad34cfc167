"""Named verification suites: the batch checks behind the `verify` command.

Each suite function returns a list of SuiteReports (one per backend it
touches).  All randomness flows from numpy's seeded PCG64 generator, so a
fixed seed reproduces every number in the report.
"""

import time
from itertools import combinations, permutations

import numpy as np

from . import algebra, chern, forms, group, linalg, sphere
from .report import Recorder
from .scalars import EXACT, FLOAT, exact_array, exact_eye, gq, to_float_array

DEFAULTS = {
    "jacobi_triples": 200,
    "fd_points": 20,
    "float_witnesses": 100,
    "equivariance_translations": 100,
    "witness_independence": 200,
    "det_product_pairs": 500,
    "det_order_pairs": 1000,
    "exp_samples": 50,
    "upsilon_samples": 500,
    "witness_samples": 1000,
    "strata_seeds": 100,
    "frame_changes": 200,
}


# -- random exact material -----------------------------------------------------


def random_exact_scalar(rng, span=3):
    return gq(int(rng.integers(-span, span + 1)), int(rng.integers(-span, span + 1)))


def random_exact_matrix(rng, n=3, span=3):
    return exact_array(
        [[random_exact_scalar(rng, span) for _ in range(n)] for _ in range(n)]
    )


def random_exact_elem(rng, span=3):
    c = np.empty(14, dtype=object)
    c[:] = [int(rng.integers(-span, span + 1)) for _ in range(14)]
    return algebra.from_coords14(c)


def random_su3(rng, scale=1.0):
    """exp of a random su(3) element: a Haar-ish special unitary matrix."""
    d = np.zeros((3, 3), dtype=complex)
    for s, w in zip(algebra._su3_basis(), rng.normal(size=8, scale=scale)):
        d = d + w * to_float_array(s)
    return linalg.matrix_exp(d)


# -- suites ---------------------------------------------------------------------


def run_algebra(samples=None, seed=0, tol=None):
    """Bracket closure, Jacobi, Killing form, basis integrity (all exact)."""
    n_jacobi = samples or DEFAULTS["jacobi_triples"]
    t0 = time.time()
    rec = Recorder("algebra", EXACT, seed)
    base = algebra.basis14()

    for i, j in combinations(range(14), 2):
        try:
            algebra.bracket(base[i], base[j])
            rec.case(0.0, 0.0)
        except algebra.ConsistencyError:
            rec.check(False, f"closure failed at pair ({i}, {j})")

    rng = np.random.default_rng(seed)
    for _ in range(n_jacobi):
        x, y, z = (random_exact_elem(rng) for _ in range(3))
        jac = (
            algebra.bracket(x, algebra.bracket(y, z))
            + algebra.bracket(y, algebra.bracket(z, x))
            + algebra.bracket(z, algebra.bracket(x, y))
        )
        rec.case(max(linalg.max_abs(jac.a), linalg.max_abs(jac.D)), 0.0, "jacobi")

    rec.check(linalg.signature(algebra.killing_gram()) == (0, 14), "killing signature")
    rec.check(_basis_rank() == 14, "basis rank")
    for b in base:
        rec.case(algebra.skew_hermitian_residual(b), 0.0, "skew-hermitian embedding")
    return [rec.report((time.time() - t0) * 1000)]


def _basis_rank():
    """Rank over Q of the flattened embedded basis (re and im separately)."""
    from fractions import Fraction

    rows = []
    for b in algebra.basis14():
        flat = algebra.embed_algebra(b).reshape(-1)
        rows.append([Fraction(x.re) for x in flat] + [Fraction(x.im) for x in flat])
    cols = len(rows[0])
    pivots = []
    for r in rows:
        for c, v in pivots:
            if r[c]:
                f = r[c] / v[c]
                for k in range(cols):
                    r[k] -= f * v[k]
        lead = next((c for c in range(cols) if r[c]), None)
        if lead is not None:
            pivots.append((lead, r))
    return len(pivots)


def run_structure_equations(samples=None, seed=0, tol=None):
    """First and second structure equations and the Maurer-Cartan identity."""
    return sphere.verify_structure_equations(
        fd_points=samples or DEFAULTS["fd_points"], seed=seed, tol=tol or 1e-6
    )


def run_nearly_kahler(samples=None, seed=0, tol=None):
    """The pullback identities and d(omega) = -3 Im(Upsilon), exact and float."""
    tol = tol or 1e-8
    n_float = samples or DEFAULTS["float_witnesses"]
    reports = sphere.verify_nearly_kahler(seed=seed)

    t0 = time.time()
    rec = Recorder("nearly-kahler", EXACT, seed)
    p = sphere.SpherePoint.base_point()
    try:
        sphere.canonical_structures(p)
        rec.case(0.0, 0.0)
    except algebra.ConsistencyError:
        rec.check(False, "exact pullback identities at the identity witness")
    # metric normalization: |dx(a)|^2 = 4 |a|^2 on the horizontal basis, exact
    for b in algebra.basis14()[:6]:
        t = sphere.tangent_from_coords(p, b.a)
        norm2 = sum(x * x for x in t.ambient)
        rec.check(norm2 == 4, "dx norm identity")
    # vertical kernel: theta and dx vanish on a = 0 elements, exactly
    for b in algebra.basis14()[6:]:
        t = sphere.dx(p.witness, b)
        rec.check(linalg.is_zero(np.asarray(t.ambient)), "vertical vector in kernel of dx")
    # Upsilon has pure type (3,0) and coefficient 8 on the coordinate triple
    ups = sphere.upsilon(p)
    split = sphere.horizontal_splitting(EXACT)
    rec.check(
        forms.type_project(ups, split, 3, 0).residual(ups) == 0.0, "upsilon type (3,0)"
    )
    for (pp, qq) in ((2, 1), (1, 2), (0, 3)):
        rec.check(
            forms.type_project(ups, split, pp, qq).is_zero(), f"upsilon ({pp},{qq}) part"
        )
    e = [exact_eye(6)[:, k] for k in range(6)]
    rec.check(ups(e[0], e[2], e[4]) == 8, "upsilon coefficient")
    reports.append(rec.report((time.time() - t0) * 1000))

    t0 = time.time()
    rec = Recorder("nearly-kahler", FLOAT, seed)
    rng = np.random.default_rng(seed)
    for _ in range(n_float):
        q = sphere.random_point(rng)
        try:
            cs = sphere.canonical_structures(q, tol=tol)
        except algebra.ConsistencyError:
            rec.check(False, "pullback identities at a float witness")
            continue
        rec.case(_structure_residuals(cs), tol)
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = sphere.tangent_from_coords(q, a)
        rec.case(
            abs(float(np.dot(t.ambient, t.ambient)) - 4 * float(np.vdot(a, a).real)),
            tol,
            "dx norm identity",
        )
    reports.append(rec.report((time.time() - t0) * 1000))
    return reports


def _structure_residuals(cs):
    """Compatibility and nondegeneracy residuals of canonical structures."""
    j, g, om = (
        np.asarray(cs.j_mat, dtype=float),
        np.asarray(cs.g_mat, dtype=float),
        np.asarray(cs.omega_mat, dtype=float),
    )
    res = float(np.abs(j @ j + np.eye(6)).max())
    res = max(res, float(np.abs(j.T @ g @ j - g).max()))
    res = max(res, float(np.abs(j.T @ om @ j - om).max()))
    res = max(res, float(np.abs(om + om.T).max()))
    if np.linalg.matrix_rank(om, tol=1e-6) != 6:
        res = max(res, 1.0)
    return res


def run_equivariance(samples=None, seed=0, tol=None):
    """Right-translation equivariance and witness independence (float)."""
    tol = tol or 1e-8
    n_trans = samples or DEFAULTS["equivariance_translations"]
    n_wit = 2 * samples if samples else DEFAULTS["witness_independence"]
    t0 = time.time()
    rec = Recorder("equivariance", FLOAT, seed)
    rng = np.random.default_rng(seed)

    for _ in range(n_trans):
        a = random_su3(rng)
        try:
            group.right_translate(a, tol=max(tol, 1e-9))
            rec.case(0.0, tol)
        except algebra.ConsistencyError as exc:
            rec.check(False, f"right translation: {exc}")
        s = group.su3_embed_group(a)
        rec.case(float(np.abs(s.m_real[:, 0] - np.eye(7)[0]).max()), tol, "stabilizer fixes e1")

    for _ in range(n_wit):
        q = sphere.random_point(rng)
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = sphere.tangent_from_coords(q, a)
        jt = sphere.jcan_apply(t)
        q2 = sphere.SpherePoint(q.y, q.witness @ group.su3_embed_group(random_su3(rng)))
        t2 = sphere.tangent_from_ambient(q2, t.ambient)
        jt2 = sphere.jcan_apply(t2)
        rec.case(float(np.abs(jt.ambient - jt2.ambient).max()), tol, "witness independence")
        # volume form evaluated through either witness agrees
        ups = sphere.upsilon(q)
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        tb, tc = sphere.tangent_from_coords(q, b), sphere.tangent_from_coords(q, c)
        v1 = ups(_coords6(t.coords), _coords6(tb.coords), _coords6(tc.coords))
        v2 = ups(
            _coords6(t2.coords),
            _coords6(sphere.tangent_from_ambient(q2, tb.ambient).coords),
            _coords6(sphere.tangent_from_ambient(q2, tc.ambient).coords),
        )
        rec.case(abs(v1 - v2), tol, "volume form invariance")
    return [rec.report((time.time() - t0) * 1000)]


def _coords6(a):
    """Complex horizontal coordinates as the 6 real frame coordinates."""
    out = np.zeros(6, dtype=complex)
    for k in range(3):
        out[2 * k] = a[k].real
        out[2 * k + 1] = a[k].imag
    return out


def run_linear_algebra(samples=None, seed=0, tol=None):
    """Determinant lemma, signatures, exponentials, splittings."""
    tol = tol or 1e-9
    n_pairs = samples or DEFAULTS["det_order_pairs"]
    n_prod = min(samples or DEFAULTS["det_product_pairs"], DEFAULTS["det_product_pairs"])
    reports = []

    t0 = time.time()
    rec = Recorder("linear-algebra", EXACT, seed)
    rng = np.random.default_rng(seed)
    for _ in range(n_prod):
        m = random_exact_matrix(rng)
        n = random_exact_matrix(rng)
        rec.check(linalg.det(m @ n) == linalg.det(m) * linalg.det(n), "det multiplicative")
    for _ in range(25):
        m = random_exact_matrix(rng)
        rec.check(linalg.det(m) == _leibniz_det(m), "det by permutation expansion")
    for _ in range(n_pairs):
        a, b = _order_pair_exact(rng)
        ok = linalg.det_order_check(a, b)
        rec.check(ok, "determinant order (exact)")
    # splitting reconstruction and local 2-form, exact
    split = forms.Splitting.standard(2)
    j = forms.from_splitting(split)
    rec.check(linalg.is_zero(j @ j + exact_eye(4)), "J^2 = -I from splitting")
    rec.check(
        linalg.is_zero(np.asarray(forms.from_splitting(split.conjugate_swap()) + j)),
        "conjugate swap negates J",
    )
    h = exact_eye(2)
    om = forms.omega_from_hermitian(h, split)
    flipped = om.conj()
    rec.check(om.residual(flipped) == 0.0, "hermitian 2-form is real")
    reports.append(rec.report((time.time() - t0) * 1000))

    t0 = time.time()
    rec = Recorder("linear-algebra", FLOAT, seed)
    rng = np.random.default_rng(seed + 1)
    for _ in range(n_pairs):
        a, b = _order_pair_float(rng)
        rec.check(linalg.det_order_check(a, b), "determinant order (float)")
    for _ in range(samples or DEFAULTS["exp_samples"]):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        sk = m - m.conj().T
        u = linalg.matrix_exp(sk)
        rec.case(float(np.abs(u @ u.conj().T - np.eye(4)).max()), 1e-9, "exp unitary")
        r = rng.normal(size=(5, 5))
        so = linalg.matrix_exp((r - r.T) + 0j)
        rec.case(float(np.abs(so.imag).max()), 1e-12, "exp real")
        rec.case(
            max(
                float(np.abs(so.real @ so.real.T - np.eye(5)).max()),
                abs(np.linalg.det(so.real) - 1),
            ),
            1e-9,
            "exp special orthogonal",
        )
        herm = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        herm = herm + herm.conj().T + 0.1 * np.eye(4)
        sig = linalg.signature(herm)
        pmat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        while abs(np.linalg.det(pmat)) < 1e-3:
            pmat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rec.check(
            linalg.signature(pmat.conj().T @ herm @ pmat) == sig,
            "signature congruence invariance",
        )
    reports.append(rec.report((time.time() - t0) * 1000))
    return reports


def _leibniz_det(m):
    total = gq(0)
    for perm in permutations(range(m.shape[0])):
        sign = _perm_sign(perm)
        term = gq(sign)
        for i, j in enumerate(perm):
            term = term * m[i, j]
        total = total + term
    return total


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _order_pair_exact(rng):
    """A > B > 0 built as B = C*C + I, A = B + D*D + I."""
    c = random_exact_matrix(rng, span=2)
    d = random_exact_matrix(rng, span=2)
    b = linalg.conj_t(c) @ c + exact_eye(3)
    a = b + linalg.conj_t(d) @ d + exact_eye(3)
    return a, b


def _order_pair_float(rng):
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    d = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = c.conj().T @ c + np.eye(3)
    a = b + d.conj().T @ d + np.eye(3)
    return a, b


def run_chern(samples=None, seed=0, tol=None):
    """Index strata, r/s solving, H, type components, the no-go witness."""
    tol = tol or 1e-9
    n_wit = samples or DEFAULTS["witness_samples"]
    n_ups = min(samples or DEFAULTS["upsilon_samples"], DEFAULTS["upsilon_samples"])
    reports = []

    t0 = time.time()
    rec = Recorder("chern", EXACT, seed)
    rng = np.random.default_rng(seed)
    for _ in range(n_ups):
        r = random_exact_matrix(rng)
        s = random_exact_matrix(rng)
        c30, c03 = chern.upsilon_components(r, s)
        rec.check(
            c30 == gq(8) * linalg.det(r) and c03 == gq(8) * linalg.det(s),
            "upsilon type components",
        )
    reports.append(rec.report((time.time() - t0) * 1000))

    t0 = time.time()
    rec = Recorder("chern", FLOAT, seed)
    p = sphere.SpherePoint.base_point()
    cs = sphere.canonical_structures(p)

    jc = chern.jcan_matrix(p, cs)
    rec.check(jc.index == (6, 0), "canonical structure has index (6,0)")
    mj = chern.CompatibleJ(p, -jc.matrix, structures=cs)
    rec.check(mj.index == (0, 6), "negated structure has index (0,6)")
    cd = chern.solve_rs(p, chern.default_frame(jc))
    rec.check(
        float(np.abs(cd.r - np.eye(3)).max()) == 0.0 and float(np.abs(cd.s).max()) == 0.0,
        "canonical coframe gives r = I, s = 0",
    )

    strata = [(6, 0), (4, 2), (2, 4), (0, 6)]
    for k in range(DEFAULTS["strata_seeds"]):
        for idx in strata:
            j = chern.sample_compatible_J(p, idx, seed=seed + 17 * k + strata.index(idx), structures=cs)
            rec.check(j.index == idx, f"stratum {idx}")

    count_pos = count_neg = 0
    for t in range(2 * n_wit):
        idx = (6, 0) if t % 2 == 0 else (0, 6)
        j = chern.sample_compatible_J(p, idx, seed=seed + 100000 + t, structures=cs)
        w = chern.theorem_witness(p, j)
        rec.check(w["ok"], f"theorem witness {idx}")
        rec.case(w["omega_residual"], tol, "omega reproduction")
        if w["ok"]:
            count_pos += idx == (6, 0)
            count_neg += idx == (0, 6)
        # defect against the (3,0) part of d(omega), proof-line convention
        cdw = chern.solve_rs(p, chern.default_frame(j))
        c30, c03 = chern.upsilon_components(cdw.r, cdw.s, tol=1e-8)
        coeff = (3 / 2j) * (c30 - np.conj(c03))
        rec.case(
            abs(coeff / 12j - chern.chern_defect(cdw)), 1e-8, "defect reconstruction"
        )

    rng2 = np.random.default_rng(seed + 5)
    for _ in range(DEFAULTS["frame_changes"]):
        j = chern.sample_compatible_J(
            p, (6, 0) if rng2.integers(2) else (0, 6), seed=int(rng2.integers(1 << 31)), structures=cs
        )
        base_frame = chern.default_frame(j)
        cd1 = chern.solve_rs(p, base_frame)
        pm = rng2.normal(size=(3, 3)) + 1j * rng2.normal(size=(3, 3))
        while abs(np.linalg.det(pm)) < 1e-3:
            pm = rng2.normal(size=(3, 3)) + 1j * rng2.normal(size=(3, 3))
        cd2 = chern.solve_rs(p, chern.PointFrame(j, pm @ base_frame.u))
        rec.check(
            linalg.signature(chern.h_matrix_raw(cd2.r, cd2.s))
            == linalg.signature(chern.h_matrix_raw(cd1.r, cd1.s)),
            "H signature frame invariance",
        )
        s1 = abs(np.linalg.det(cd1.r)) - abs(np.linalg.det(cd1.s))
        s2 = abs(np.linalg.det(cd2.r)) - abs(np.linalg.det(cd2.s))
        rec.check(np.sign(s1) == np.sign(s2), "determinant gap sign frame invariance")
    rec.check(count_pos == n_wit and count_neg == n_wit, "all witnesses succeeded")
    reports.append(rec.report((time.time() - t0) * 1000))
    return reports


SUITES = {
    "algebra": run_algebra,
    "structure-equations": run_structure_equations,
    "nearly-kahler": run_nearly_kahler,
    "equivariance": run_equivariance,
    "linear-algebra": run_linear_algebra,
    "chern": run_chern,
}


def run_suites(names, samples=None, seed=0, tol=None):
    """Run the named suites and return reports sorted by (suite, backend)."""
    reports = []
    for name in names:
        reports.extend(SUITES[name](samples=samples, seed=seed, tol=tol))
    reports.sort(key=lambda r: (r.suite, r.backend))
    return reports
