"""The homogeneous geometry of the six-sphere under the group action.

Every point carries a witness group element g with x(g) = y; tangent vectors
are handled in the horizontal coordinates a in C^3 attached to that witness,
with the ambient representative given by the differential of the orbit map,

    dx(A) = -2i f . a + 2i fbar . abar.

The pushforwards of the six horizontal basis elements form the point's frame;
all 6x6 matrices (metric, canonical almost complex structure, fundamental
2-form) are written in that frame.  With the identity witness everything is
exact.
"""

import time
from itertools import combinations

import numpy as np

from . import linalg
from .algebra import (
    DIM,
    ConsistencyError,
    basis14,
    bracket_coords,
    coords14,
    cross_matrix,
    embed_algebra,
    from_coords14,
    kappa_form,
    phi_form,
    theta_form,
)
from .forms import MultiForm, Splitting, left_invariant_d, type_project, wedge
from .group import G2GroupElem, SPLIT_BASIS_FLOAT, dx_ambient, exp_group, lift_point
from .report import Recorder
from .scalars import EXACT, FLOAT, abs_value, backend_of, gq, to_float_array

HORIZONTAL = slice(0, 6)


class SpherePoint:
    """A unit vector with a witness group element mapping e1 to it."""

    __slots__ = ("y", "witness")

    def __init__(self, y, witness, tol=1e-8):
        self.y = y
        self.witness = witness
        yf = to_float_array(y).real if backend_of(np.asarray(y)) == EXACT else np.asarray(y, float)
        if abs(np.linalg.norm(yf) - 1.0) > tol:
            raise ValueError("point is not on the unit sphere")
        wx = witness.m_real[:, 0]
        wxf = to_float_array(wx).real if backend_of(wx) == EXACT else wx
        if np.linalg.norm(wxf - yf) > tol:
            raise ValueError("witness does not map the base point to y")

    @property
    def backend(self):
        return self.witness.backend

    @classmethod
    def base_point(cls):
        """e1 with the exact identity witness."""
        g = G2GroupElem.identity(EXACT)
        return cls(g.m_real[:, 0], g)

    @classmethod
    def from_unit_vector(cls, y):
        return cls(np.asarray(y, float), lift_point(y))


def x_map(g):
    """The orbit map: the first column of the real matrix, with witness g."""
    return SpherePoint(g.m_real[:, 0], g)


class TangentVector:
    """A tangent vector at a sphere point, in witness-horizontal coordinates."""

    __slots__ = ("base", "coords", "ambient")

    def __init__(self, base, coords, ambient):
        self.base = base
        self.coords = coords
        self.ambient = ambient


def _matched_frame(p, a):
    """Witness frame and coordinates in one common backend (float on mixes)."""
    a = np.asarray(a)
    frame = p.witness.frame()
    if backend_of(a) != p.backend:
        return frame.to_float(), to_float_array(a)
    return frame, a


def dx(g, el):
    """Differential of the orbit map; vertical elements map to zero."""
    return tangent_from_coords(x_map(g), el.a.copy())


def tangent_from_coords(p, a):
    """The tangent vector with the given horizontal coordinates at p's witness."""
    frame, a = _matched_frame(p, a)
    amb = dx_ambient(frame, a)
    if backend_of(np.asarray(amb)) == EXACT:
        for v in amb:
            if v.im != 0:
                raise ConsistencyError("dx produced a non-real ambient vector")
        real_amb = amb
    else:
        if float(np.abs(amb.imag).max()) > linalg.STRUCT_TOL:
            raise ConsistencyError("dx produced a non-real ambient vector")
        real_amb = amb.real
    return TangentVector(p, a, real_amb)


def tangent_from_ambient(p, v):
    """Recover horizontal coordinates: a_k = i <f_k, v> (Hermitian pairing)."""
    frame, v = _matched_frame(p, np.asarray(v))
    if backend_of(v) == EXACT:
        a = np.empty(3, dtype=object)
        for k in range(3):
            acc = gq(0)
            for i in range(7):
                acc = acc + frame.f[k][i].conjugate() * v[i]
            a[k] = gq(0, 1) * acc
    else:
        a = np.array([1j * np.vdot(frame.f[k], v) for k in range(3)])
    t = tangent_from_coords(p, a)
    res = linalg.max_abs(np.asarray(t.ambient) - np.asarray(v))
    if res > 1e-8:
        raise ValueError(f"vector is not tangent at this point (residual {res:.3e})")
    return t


def jcan_apply(v):
    """The canonical almost complex structure: multiply coordinates by i."""
    i_unit = gq(0, 1) if backend_of(np.asarray(v.coords)) == EXACT else 1j
    return tangent_from_coords(v.base, i_unit * np.asarray(v.coords))


def frame_matrix(p):
    """7x6 matrix whose columns push forward the horizontal basis at p."""
    cols = [tangent_from_coords(p, b.a if p.backend == EXACT else to_float_array(b.a)).ambient
            for b in basis14()[HORIZONTAL]]
    return np.stack([np.asarray(c) for c in cols], axis=1)


def _jcan_frame_matrix(backend):
    """J in frame coordinates: the block rotation on each coordinate pair."""
    if backend == EXACT:
        from .scalars import exact_zeros
        j = exact_zeros((6, 6))
        one = gq(1)
        for k in range(3):
            j[2 * k + 1, 2 * k] = one
            j[2 * k, 2 * k + 1] = -one
        return j
    j = np.zeros((6, 6))
    for k in range(3):
        j[2 * k + 1, 2 * k] = 1.0
        j[2 * k, 2 * k + 1] = -1.0
    return j


class CanonicalStructures:
    """Metric, canonical J, fundamental 2-form and complex volume form at a point.

    All matrices are written in the frame of horizontal pushforwards
    (`frame`), in which the metric is exactly 4I and J is the block rotation.
    """

    __slots__ = ("point", "frame", "g_mat", "j_mat", "omega_mat", "upsilon")

    def __init__(self, point, frame, g_mat, j_mat, omega_mat, upsilon):
        self.point = point
        self.frame = frame
        self.g_mat = g_mat
        self.j_mat = j_mat
        self.omega_mat = omega_mat
        self.upsilon = upsilon


def upsilon_form(backend=EXACT):
    """The canonical complex volume form in frame coordinates: 8 t1^t2^t3,
    where t_k = dz_k extracts the k-th complex horizontal coordinate."""
    thetas = []
    for k in range(3):
        zk = MultiForm.coordinate(6, 2 * k, backend) + MultiForm.coordinate(6, 2 * k + 1, backend).scale(
            gq(0, 1) if backend == EXACT else 1j
        )
        thetas.append(zk)
    ups = wedge(wedge(thetas[0], thetas[1]), thetas[2])
    return ups.scale(gq(8) if backend == EXACT else 8.0)


def canonical_structures(p, tol=1e-8):
    """Assemble and cross-check the canonical structures at a point.

    The pullback identities (metric = 4 theta^t o thetabar symmetrized,
    2-form = 2i theta^t ^ thetabar) are verified on all horizontal basis
    pairs: exactly for an exact witness, within `tol` otherwise.
    """
    backend = p.backend
    fm = frame_matrix(p)
    g_mat = fm.T @ fm
    j_mat = _jcan_frame_matrix(backend)
    omega_mat = j_mat.T @ g_mat
    exact = backend == EXACT

    base = basis14()[HORIZONTAL]
    theta_vals = [b.a if exact else to_float_array(b.a) for b in base]

    worst = 0.0
    for i in range(6):
        for j in range(6):
            a, b = theta_vals[i], theta_vals[j]
            ab = sum(a[k] * b[k].conjugate() for k in range(3))
            ba = sum(b[k] * a[k].conjugate() for k in range(3))
            two = gq(2) if exact else 2.0
            expected_g = two * (ab + ba)
            expected_o = (gq(0, 2) if exact else 2j) * (ab - ba)
            worst = max(worst, abs_value(g_mat[i, j] - expected_g))
            worst = max(worst, abs_value(omega_mat[i, j] - expected_o))
    if exact and worst != 0.0:
        raise ConsistencyError("exact pullback identity failed for the metric or 2-form")
    if not exact and worst > tol:
        raise ConsistencyError(f"pullback identities failed (residual {worst:.3e})")
    return CanonicalStructures(p, fm, g_mat, j_mat, omega_mat, upsilon_form(backend))


def upsilon(p):
    """The complex volume 3-form at p, in frame coordinates."""
    return upsilon_form(p.backend)


def horizontal_splitting(backend=EXACT):
    """The (1,0) splitting of the frame-coordinate space for the canonical J."""
    return Splitting.standard(3, backend)


# -- executable verification ---------------------------------------------------


def _conj_value_form(form):
    """[thetabar]: apply the hat map to the conjugated values of a C^3 form."""
    return form.conj().map_values(lambda v: cross_matrix(v.reshape(3)), (3, 3))


def second_structure_residuals():
    """Exact residual tables for both second structure equations and the
    Maurer-Cartan identity, over the full basis."""
    th = theta_form()
    kp = kappa_form()
    ph = phi_form()
    d_theta = left_invariant_d(th, bracket_coords)
    d_kappa = left_invariant_d(kp, bracket_coords)
    d_phi = left_invariant_d(ph, bracket_coords)

    hat_bar = _conj_value_form(th)          # [thetabar]
    hat = th.map_values(lambda v: cross_matrix(v.reshape(3)), (3, 3))  # [theta]
    theta_bar = th.conj()
    theta_star = theta_bar.transpose()      # row vector values

    rhs_theta = -wedge(kp, th) + wedge(hat_bar, theta_bar)
    rhs_kappa = (
        -wedge(kp, kp)
        + wedge(th, theta_star).scale(gq(2))
        - wedge(hat_bar, hat)
    )
    rhs_phi = -wedge(ph, ph)
    return (
        d_theta - rhs_theta,
        d_kappa - rhs_kappa,
        d_phi - rhs_phi,
    )


def verify_structure_equations(fd_points=20, seed=0, tol=1e-6):
    """Check the structure equations: exact tables plus finite differences.

    Returns two reports: the exact second structure equations (and the
    Maurer-Cartan identity) over all basis pairs, and a float report for the
    first structure equation d(x, f, fbar) = (x, f, fbar) phi along
    exponential curves at `fd_points` random points.
    """
    t0 = time.time()
    rec = Recorder("structure-equations", EXACT, seed)
    res_theta, res_kappa, res_phi = second_structure_residuals()
    for pair in combinations(range(DIM), 2):
        rec.case(linalg.max_abs(res_theta[pair]), 0.0, f"dtheta at {pair}")
        rec.case(linalg.max_abs(res_kappa[pair]), 0.0, f"dkappa at {pair}")
        rec.case(linalg.max_abs(res_phi[pair]), 0.0, f"dphi at {pair}")
    exact_report = rec.report((time.time() - t0) * 1000)

    t0 = time.time()
    rng = np.random.default_rng(seed)
    rec = Recorder("structure-equations", FLOAT, seed)
    h = 1e-6
    for _ in range(fd_points):
        g = _random_group_elem(rng)
        a = _random_algebra_elem(rng)
        em = embed_algebra(a)
        col = g.m_real @ SPLIT_BASIS_FLOAT
        plus = (g @ exp_group(a, h)).m_real @ SPLIT_BASIS_FLOAT
        minus = (g @ exp_group(a, -h)).m_real @ SPLIT_BASIS_FLOAT
        fd = (plus - minus) / (2 * h)
        rec.case(float(np.abs(fd - col @ em).max()), tol, "first structure equation")
    float_report = rec.report((time.time() - t0) * 1000)
    return [exact_report, float_report]


def verify_nearly_kahler(seed=0):
    """Exact check of d(2i theta^t ^ thetabar) = -3 Im(8 theta1^theta2^theta3)
    over all basis triples."""
    t0 = time.time()
    rec = Recorder("nearly-kahler", EXACT, seed)
    th = theta_form()
    pullback_omega = wedge(th.transpose(), th.conj()).scale(gq(0, 2))
    lhs = left_invariant_d(pullback_omega, bracket_coords)
    ups = wedge(wedge(_theta_component(0), _theta_component(1)), _theta_component(2)).scale(gq(8))
    rhs = ups.imag_part().scale(gq(-3))
    diff = lhs - rhs
    for triple in combinations(range(DIM), 3):
        rec.case(linalg.max_abs(np.asarray([[diff[triple][0, 0]]])), 0.0, f"triple {triple}")
    return [rec.report((time.time() - t0) * 1000)]


def _theta_component(k):
    """theta^k as a scalar-valued exact 1-form on the Lie algebra."""
    th = theta_form()
    out = MultiForm(1, DIM, (1, 1), EXACT)
    for idx in th.keys():
        v = th.coeffs[idx][k, 0]
        if v:
            arr = np.empty((1, 1), dtype=object)
            arr[0, 0] = v
            out[idx] = arr
    return out


def _random_algebra_elem(rng, scale=1.0):
    c = rng.normal(size=14, scale=scale)
    return from_coords14(c)


def _random_group_elem(rng, scale=1.0):
    return exp_group(_random_algebra_elem(rng, scale))


def random_point(rng):
    """A uniformly random sphere point with a lifted witness."""
    y = rng.normal(size=7)
    y = y / np.linalg.norm(y)
    return SpherePoint.from_unit_vector(y)
