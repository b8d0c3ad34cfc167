"""The pointwise algebra behind the nonexistence of compatible complex structures.

Everything happens on the 6-dimensional tangent space at one sphere point,
written in the frame of horizontal pushforwards.  A compatible structure J
is measured against the canonical 2-form; a J-complex coframe eta gives the
change-of-basis matrices r, s with theta = r eta + s etabar, and from these
the Hermitian matrix H = r^t rbar - sbar^t s.  When H is definite the strict
determinant inequality |det r| != |det s| contradicts the identity
det(sbar) = det(r) that any integrable compatible structure would have to
satisfy, and that contradiction is checked sample by sample.
"""

import numpy as np

from . import linalg
from .algebra import ConsistencyError
from .forms import MultiForm, Splitting, type_project, wedge
from .scalars import EXACT, FLOAT, backend_of, gq, to_float_array
from .sphere import canonical_structures

# theta in frame coordinates: row k extracts the k-th complex coordinate
U_CAN = np.zeros((3, 6), dtype=complex)
for _k in range(3):
    U_CAN[_k, 2 * _k] = 1.0
    U_CAN[_k, 2 * _k + 1] = 1j
del _k


class CompatibleJ:
    """An omega-compatible almost complex structure at one point.

    `matrix` is 6x6 real in the point's frame; construction enforces
    J^2 = -I and compatibility with the canonical 2-form, and computes the
    index of g_J = omega(., J.).
    """

    __slots__ = ("base", "matrix", "index", "structures")

    def __init__(self, base, matrix, tol=1e-9, structures=None):
        self.base = base
        self.matrix = np.asarray(matrix, dtype=float)
        self.structures = structures or canonical_structures(base)
        omega = _float_mat(self.structures.omega_mat)
        j = self.matrix
        if float(np.abs(j @ j + np.eye(6)).max()) > tol:
            raise ValueError("J^2 != -I beyond tolerance")
        if float(np.abs(j.T @ omega @ j - omega).max()) > tol:
            raise ValueError("J is not compatible with the 2-form beyond tolerance")
        self.index = _index_of(omega, j, tol)


def _float_mat(m):
    m = np.asarray(m)
    if m.dtype == object:
        return to_float_array(m).real
    return np.asarray(m, dtype=float)


def _index_of(omega, j, tol=1e-9):
    g_j = omega @ j
    asym = float(np.abs(g_j - g_j.T).max())
    if asym > tol:
        raise ValueError(f"omega(., J.) is not symmetric (residual {asym:.3e}); J not compatible")
    p, q = linalg.signature((g_j + g_j.T) / 2 + 0j)
    return (p, q)


def omega_index(j):
    """The index (2p, 2q) of the symmetric form omega(., J.)."""
    if isinstance(j, CompatibleJ):
        return _index_of(_float_mat(j.structures.omega_mat), j.matrix)
    raise TypeError("omega_index expects a CompatibleJ")


def jcan_matrix(p, structures=None):
    """The canonical structure at p as a CompatibleJ."""
    structures = structures or canonical_structures(p)
    return CompatibleJ(p, _float_mat(structures.j_mat), structures=structures)


def sample_compatible_J(p, index, seed, scale=0.4, tol=1e-9, structures=None):
    """A deterministic compatible structure with the requested index.

    Start from the canonical J, flip q of the three complex coordinate lines
    to set the index, then conjugate by exp(S) with omega.S symmetric (a
    2-form-preserving transformation, so compatibility and index survive).
    """
    p2, q2 = index
    if p2 % 2 or q2 % 2 or p2 + q2 != 6:
        raise ValueError("index must be (2p, 2q) with p + q = 3")
    q = q2 // 2
    structures = structures or canonical_structures(p)
    omega = _float_mat(structures.omega_mat)
    j0 = _float_mat(structures.j_mat).copy()
    for k in range(q):
        j0[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] *= -1.0
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(6, 6), scale=scale)
    m = (m + m.T) / 2
    s = np.linalg.solve(omega, m)  # omega @ s = m symmetric => s preserves omega
    g = linalg.matrix_exp(s + 0j).real
    j = g @ j0 @ np.linalg.inv(g)
    out = CompatibleJ(p, j, tol=tol, structures=structures)
    if out.index != tuple(index):
        raise ConsistencyError(
            f"sampled structure has index {out.index}, requested {tuple(index)}"
        )
    return out


class PointFrame:
    """A J-complex coframe: u maps the tangent space C-linearly onto C^3.

    Stored as a 3x6 complex matrix in frame coordinates; rows together with
    their conjugates must form a basis of the complexified cotangent space.
    """

    __slots__ = ("j", "u")

    def __init__(self, j, u, tol=1e-9):
        self.j = j
        self.u = np.asarray(u, dtype=complex)
        if self.u.shape != (3, 6):
            raise ValueError("frame must be a 3x6 complex matrix")
        lin = float(np.abs(self.u @ j.matrix - 1j * self.u).max())
        if lin > tol:
            raise ValueError(f"frame is not complex-linear for J (residual {lin:.3e})")
        if abs(np.linalg.det(self.basis_matrix())) < 1e-12:
            raise ValueError("frame rows and their conjugates do not form a basis")

    def basis_matrix(self):
        return np.vstack([self.u, self.u.conj()])


def default_frame(j, seed=None):
    """The theta-coordinate frame transported to J.

    Projecting the canonical coordinate rows onto the (1,0) side of J gives a
    frame that reduces to the theta coordinates at the canonical structure;
    where that projection degenerates (e.g. at -J_can) the conjugate rows and
    then seeded random rows are tried.
    """
    candidates = [U_CAN, U_CAN.conj()]
    rng = np.random.default_rng(0 if seed is None else seed)
    for attempt in range(8):
        for cand in candidates:
            u = cand @ (np.eye(6) - 1j * j.matrix) / 2
            b = np.vstack([u, u.conj()])
            if abs(np.linalg.det(b)) > 1e-8:
                return PointFrame(j, u)
        candidates = [rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))]
    raise ConsistencyError("could not build a complex frame for J")


def random_frame(j, seed):
    """A random frame: the default one composed with random GL(3, C)."""
    rng = np.random.default_rng(seed)
    p = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    while abs(np.linalg.det(p)) < 1e-3:
        p = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return PointFrame(j, p @ default_frame(j).u)


class ChernData:
    """The change of basis theta = r eta + s etabar and derived quantities."""

    __slots__ = ("point", "frame", "r", "s", "h", "blockdet", "residual")

    def __init__(self, point, frame, r, s, h, blockdet, residual):
        self.point = point
        self.frame = frame
        self.r = r
        self.s = s
        self.h = h
        self.blockdet = blockdet
        self.residual = residual

    def upsilon_components(self):
        return upsilon_components(self.r, self.s)


def solve_rs(p, frame, tol=1e-10):
    """Solve theta = r eta + s etabar against a J-complex coframe.

    The six covectors (eta, etabar) form a basis, so the 6x6 system has a
    unique solution; its block determinant is checked nonzero and the
    conjugate relation thetabar = sbar eta + rbar etabar is verified.
    """
    b = frame.basis_matrix()
    rs = U_CAN @ np.linalg.inv(b)
    r, s = rs[:, :3].copy(), rs[:, 3:].copy()
    residual = float(np.abs(U_CAN - (r @ frame.u + s @ frame.u.conj())).max())
    conj_res = float(
        np.abs(U_CAN.conj() - (s.conj() @ frame.u + r.conj() @ frame.u.conj())).max()
    )
    residual = max(residual, conj_res)
    if residual > tol:
        raise ConsistencyError(f"coframe solve residual {residual:.3e} exceeds {tol:.1e}")
    h = h_matrix_raw(r, s)
    blockdet = complex(np.linalg.det(np.block([[r, s], [s.conj(), r.conj()]])))
    if abs(blockdet) < 1e-12:
        raise ConsistencyError("block change-of-basis matrix is singular")
    return ChernData(p, frame, r, s, h, blockdet, residual)


def h_matrix_raw(r, s):
    """H = r^t rbar - sbar^t s (Hermitian for any r, s)."""
    return r.T @ r.conj() - s.conj().T @ s


def h_matrix(cd, tol=1e-9):
    """H together with its defining property: 2i eta^t H etabar reproduces
    the 2-form on real tangent pairs whenever J is compatible."""
    h = h_matrix_raw(cd.r, cd.s)
    herm = float(np.abs(h - h.conj().T).max())
    if herm > tol:
        raise ConsistencyError(f"H is not Hermitian (residual {herm:.3e})")
    res = omega_reproduction_residual(cd)
    if res > tol:
        raise ConsistencyError(f"2i eta^t H etabar does not reproduce omega ({res:.3e})")
    return h


def omega_reproduction_residual(cd):
    """max |2i eta^t H etabar - omega| over the frame basis pairs."""
    u = cd.frame.u
    h = cd.h
    omega = _float_mat(cd.frame.j.structures.omega_mat)
    worst = 0.0
    for i in range(6):
        for j in range(6):
            ei, ej = np.eye(6)[i], np.eye(6)[j]
            val = 2j * ((u @ ei) @ h @ (u @ ej).conj() - (u @ ej) @ h @ (u @ ei).conj())
            worst = max(worst, abs(val - omega[i, j]))
    return worst


def upsilon_components(r, s, tol=1e-10):
    """Coefficients of the (3,0) and (0,3) parts of 8 theta1^theta2^theta3
    after substituting theta = r eta + s etabar.

    Computed by expanding the wedge in an abstract eta-coordinate space and
    projecting by type; the results are asserted against 8 det(r), 8 det(s)
    (exactly on the exact backend) before returning.
    """
    r = np.asarray(r)
    s = np.asarray(s)
    exact = backend_of(r) == EXACT
    split = Splitting.standard(3, EXACT if exact else FLOAT)
    duals = [split.dual_form(a) for a in range(6)]
    thetas = []
    for k in range(3):
        acc = None
        for a in range(3):
            for coeff, dual in ((r[k, a], duals[a]), (s[k, a], duals[3 + a])):
                if coeff == 0:
                    continue
                term = dual.scale(coeff)
                acc = term if acc is None else acc + term
        if acc is None:
            acc = MultiForm(1, 6, (1, 1), split.backend)
        thetas.append(acc)
    ups = wedge(wedge(thetas[0], thetas[1]), thetas[2]).scale(gq(8) if exact else 8.0)
    c30_form = type_project(ups, split, 3, 0)
    c03_form = type_project(ups, split, 0, 3)
    w = [split.full_basis()[:, a] for a in range(6)]
    c30 = c30_form(w[0], w[1], w[2])
    c03 = c03_form(w[3], w[4], w[5])
    mixed = (ups - c30_form - c03_form)(w[0], w[1], w[2])
    det_r, det_s = linalg.det(r), linalg.det(s)
    eight = gq(8) if exact else 8.0
    if exact:
        if c30 != eight * det_r or c03 != eight * det_s or mixed != 0:
            raise ConsistencyError("type components disagree with the determinant formula")
    else:
        err = max(abs(c30 - 8 * det_r), abs(c03 - 8 * det_s))
        if err > tol:
            raise ConsistencyError(
                f"type components disagree with the determinant formula ({err:.3e})"
            )
    return c30, c03


def chern_defect(cd_or_r, s=None):
    """det(sbar) - det(r): zero exactly when the point satisfies the identity
    an integrable compatible structure would impose."""
    if s is None:
        r, s = cd_or_r.r, cd_or_r.s
    else:
        r = cd_or_r
    return linalg.det(np.asarray(s).conj()) - linalg.det(np.asarray(r))


def theorem_witness(p, j, frame=None, tol=1e-9, margin=1e-10):
    """One sample of the contradiction: definite H forces |det r| != |det s|.

    For positive definite H (index (6,0)): r^t rbar > sbar^t s >= 0 gives
    |det r| > |det s|, so the defect det(sbar) - det(r) cannot vanish; the
    mirror holds for negative definite H.  Returns the measured quantities.
    """
    if j.index not in ((6, 0), (0, 6)):
        raise ValueError("theorem witness needs a definite stratum: index (6,0) or (0,6)")
    frame = frame or default_frame(j)
    cd = solve_rs(p, frame)
    h = h_matrix(cd)
    evals = linalg.eigvalsh(h)
    positive = j.index == (6, 0)
    if positive and evals.min() <= margin:
        raise ConsistencyError("H is not positive definite on the (6,0) stratum")
    if not positive and evals.max() >= -margin:
        raise ConsistencyError("H is not negative definite on the (0,6) stratum")
    # eigenvalue route for A > B >= 0 => det A > det B (B may be singular)
    a_mat = cd.r.T @ cd.r.conj()
    b_mat = cd.s.conj().T @ cd.s
    if positive:
        gap = linalg.eigvalsh(a_mat - b_mat).min()
        b_floor = linalg.eigvalsh(b_mat).min()
    else:
        gap = linalg.eigvalsh(b_mat - a_mat).min()
        b_floor = linalg.eigvalsh(a_mat).min()
    det_r = abs(linalg.det(cd.r))
    det_s = abs(linalg.det(cd.s))
    big, small = (det_r, det_s) if positive else (det_s, det_r)
    defect = chern_defect(cd)
    return {
        "index": j.index,
        "det_r": det_r,
        "det_s": det_s,
        "margin": big**2 - small**2,
        "order_gap": float(gap),
        "psd_floor": float(b_floor),
        "defect": abs(defect),
        "omega_residual": omega_reproduction_residual(cd),
        "ok": bool(
            gap > margin
            and b_floor > -tol
            and big**2 - small**2 > margin
            and abs(defect) > margin
        ),
    }
