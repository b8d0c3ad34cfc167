"""Group elements, the moving frame, and the Maurer-Cartan calculus.

A group element is stored as its 7x7 matrix in the split basis
(e1, F1, F2, F3, F1bar, F2bar, F3bar) with F_k = (e_{2k} - i e_{2k+1})/2;
the real matrix in the e-basis is obtained by the fixed change of basis and
must be special orthogonal.  Tangent vectors at g are encoded by their left
translation A = g^{-1} X, so all forms are evaluated in Lie algebra
coordinates regardless of the base point.
"""

from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import (
    ConsistencyError,
    G2AlgebraElem,
    basis14,
    coords14,
    embed_algebra,
    project_algebra,
    theta_form,
)
from .forms import MultiForm
from .scalars import (
    EXACT,
    FLOAT,
    backend_of,
    exact_eye,
    exact_zeros,
    gq,
    to_float_array,
)


class LiftConvergenceError(RuntimeError):
    """Numerical failure: a point lift did not reach the target residual."""


def _split_basis_matrix():
    """Columns: e1, F1, F2, F3, and conjugates, in e-basis coordinates."""
    p = exact_zeros((7, 7))
    p[0, 0] = gq(1)
    half = Fraction(1, 2)
    for k in range(3):
        p[2 * k + 1, 1 + k] = gq(half)
        p[2 * k + 2, 1 + k] = gq(0, -half)
        p[2 * k + 1, 4 + k] = gq(half)
        p[2 * k + 2, 4 + k] = gq(0, half)
    return p


SPLIT_BASIS = _split_basis_matrix()
SPLIT_BASIS_INV = linalg.inv(SPLIT_BASIS)
SPLIT_BASIS_FLOAT = to_float_array(SPLIT_BASIS)
SPLIT_BASIS_FLOAT_INV = to_float_array(SPLIT_BASIS_INV)


class MovingFrame:
    """The tuple (x, f1, f2, f3) of columns of the complexified group matrix."""

    __slots__ = ("x", "f")

    def __init__(self, x, f):
        self.x = x
        self.f = f  # list of three C^7 vectors

    def to_float(self):
        if backend_of(np.asarray(self.x)) == FLOAT:
            return self
        return MovingFrame(to_float_array(self.x), [to_float_array(v) for v in self.f])

    def orthogonality_residual(self):
        """Deviation from |x| = 1, |f_k| = 1/sqrt(2), mutual orthogonality."""
        vecs = [to_float_array(v) for v in [self.x, *self.f]]
        vecs += [v.conj() for v in vecs[1:]]
        target = np.diag([1.0] + [0.5] * 6)
        gram = np.array(
            [[np.vdot(u, v) for v in vecs] for u in vecs], dtype=complex
        )
        return float(np.abs(gram - target).max())


class G2GroupElem:
    """A group element; `m_split` is its matrix in the split basis."""

    __slots__ = ("m_split", "_m_real")

    def __init__(self, m_split):
        self.m_split = np.asarray(m_split)
        if self.m_split.shape != (7, 7):
            raise ValueError("expected a 7x7 matrix")
        self._m_real = None

    @classmethod
    def identity(cls, backend=FLOAT):
        if backend == EXACT:
            from .scalars import exact_eye
            return cls(exact_eye(7))
        return cls(np.eye(7, dtype=complex))

    @property
    def backend(self):
        return backend_of(self.m_split)

    @property
    def m_real(self):
        """The real e-basis matrix (rho_g); cached."""
        if self._m_real is None:
            if self.backend == EXACT:
                m = SPLIT_BASIS @ self.m_split @ SPLIT_BASIS_INV
                for x in m.reshape(-1):
                    if x.im != 0:
                        raise ConsistencyError("group element is not real in the e-basis")
                self._m_real = m
            else:
                m = SPLIT_BASIS_FLOAT @ self.m_split @ SPLIT_BASIS_FLOAT_INV
                if float(np.abs(m.imag).max()) > 1e-8:
                    raise ConsistencyError("group element is not real in the e-basis")
                self._m_real = m.real
        return self._m_real

    def __matmul__(self, other):
        return G2GroupElem(self.m_split @ other.m_split)

    def inverse(self):
        return G2GroupElem(linalg.inv(self.m_split))

    def frame(self):
        """The moving frame: x = g e1, f_k = (g e_{2k} - i g e_{2k+1})/2."""
        cols = self.m_real if self.backend == EXACT else self.m_real.astype(complex)
        x = cols[:, 0]
        if self.backend == EXACT:
            half = gq(Fraction(1, 2))
            mih = gq(0, Fraction(-1, 2))
            f = [half * cols[:, 2 * k + 1] + mih * cols[:, 2 * k + 2] for k in range(3)]
        else:
            f = [(cols[:, 2 * k + 1] - 1j * cols[:, 2 * k + 2]) / 2 for k in range(3)]
        return MovingFrame(x, f)

    def orthogonality_residual(self):
        r = self.m_real
        if self.backend == EXACT:
            r = to_float_array(r).real
        return float(
            max(
                np.abs(r.T @ r - np.eye(7)).max(),
                abs(np.linalg.det(r) - 1.0),
            )
        )

    def ad_residual(self):
        """How far conjugation by g moves the embedded algebra out of g2."""
        g = to_float_array(self.m_split) if self.backend == EXACT else self.m_split
        ginv = np.linalg.inv(g)
        worst = 0.0
        for b in basis14():
            m = g @ to_float_array(embed_algebra(b)) @ ginv
            try:
                el = project_algebra(m, tol=np.inf)
            except ConsistencyError:
                return np.inf
            worst = max(worst, linalg.max_abs(m - to_float_array(embed_algebra(el))))
        return worst

    def check(self, tol=1e-8):
        """Enforce the group-element invariants; raises ConsistencyError."""
        if self.orthogonality_residual() > tol:
            raise ConsistencyError("matrix is not special orthogonal within tolerance")
        if self.ad_residual() > tol:
            raise ConsistencyError("conjugation does not preserve g2 within tolerance")
        return self


def exp_group(el, t=1.0, tol=1e-8):
    """exp(t X) as a group element (float backend; validated)."""
    el = el.to_float()
    g = G2GroupElem(linalg.matrix_exp(float(t) * embed_algebra(el)))
    return g.check(tol)


def su3_embed_group(a_mat, tol=linalg.STRUCT_TOL):
    """The stabilizer embedding diag(1, A, conj(A)) for special unitary A."""
    a_mat = np.asarray(a_mat)
    if a_mat.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    exact = backend_of(a_mat) == EXACT
    uni = a_mat.conj().T @ a_mat
    d = linalg.det(a_mat)
    if exact:
        ok = linalg.is_zero(uni - exact_eye(3)) and d == 1
    else:
        ok = linalg.max_abs(uni - np.eye(3)) <= tol and abs(d - 1.0) <= tol
    if not ok:
        raise ValueError("matrix is not special unitary")
    m = exact_zeros((7, 7)) if exact else np.zeros((7, 7), dtype=complex)
    m[0, 0] = gq(1) if exact else 1.0
    m[1:4, 1:4] = a_mat
    m[4:7, 4:7] = a_mat.conj()
    return G2GroupElem(m)


def maurer_cartan(g, tangent, tol=linalg.STRUCT_TOL):
    """The Maurer-Cartan form: g^{-1} times a tangent vector at g.

    Tangent vectors are encoded either as an algebra element A (meaning
    X = g A, so the value is A itself) or as a raw 7x7 split-basis matrix,
    in which case g^{-1} X is projected back to the algebra.
    """
    if isinstance(tangent, G2AlgebraElem):
        return tangent
    x = np.asarray(tangent)
    if x.shape != (7, 7):
        raise ValueError("raw tangent input must be a 7x7 matrix")
    val = linalg.inv(g.m_split) @ x
    return project_algebra(val, tol=tol)


def right_translate(a_mat, form=None, tol=linalg.STRUCT_TOL):
    """Pull back a theta-valued left-invariant form along right translation.

    Computed from first principles: the argument is conjugated into the
    algebra by the stabilizer element diag(1, A, conj(A)) and re-evaluated.
    For the tautological theta the result must equal A^{-1} theta; that
    equality is asserted before returning.
    """
    if form is None:
        form = theta_form().to_float()
    s = su3_embed_group(a_mat)
    s_mat = to_float_array(s.m_split)
    s_inv = np.linalg.inv(s_mat)
    a_inv = np.linalg.inv(to_float_array(np.asarray(a_mat)))
    vals = []
    expected = []
    for j, b in enumerate(basis14()):
        conj = s_inv @ to_float_array(embed_algebra(b)) @ s_mat
        el = project_algebra(conj, tol=max(tol, 1e-7))
        vals.append(form(coords14(el.to_float())))
        expected.append(a_inv @ form[(j,)])
    worst = max(float(np.abs(v - e).max()) for v, e in zip(vals, expected))
    if worst > tol:
        raise ConsistencyError(
            f"right translation did not act by A^{{-1}} (residual {worst:.3e})"
        )
    out = MultiForm(1, 14, form.shape, FLOAT)
    for j, v in enumerate(vals):
        if float(np.abs(v).max()) > 0:
            out[(j,)] = v
    return out


# -- point lifting -------------------------------------------------------------


def _horizontal_elem(a):
    """The algebra element with horizontal part a and D = 0 (float)."""
    return G2AlgebraElem(np.asarray(a, dtype=complex), np.zeros((3, 3), complex), check=False)


def lift_point(y, tol=1e-8, max_newton=25):
    """A group element g with x(g) = rho_g e1 equal to y.

    One-parameter subgroups generated by horizontal elements rotate e1 along
    great circles, so a single exponential aligns e1 with y exactly; a damped
    Gauss-Newton refinement stands by for the (unobserved) case where the
    closed form leaves residual above tolerance.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (7,) or abs(np.linalg.norm(y) - 1.0) > 1e-9:
        raise ValueError("expected a unit vector in R^7")
    psi = float(np.arccos(np.clip(y[0], -1.0, 1.0)))
    if psi < 1e-14:
        return G2GroupElem.identity()
    u = y - y[0] * np.eye(7)[0]
    nu = np.linalg.norm(u)
    if nu < 1e-14:
        u = np.eye(7)[1]  # y = -e1: any tangent direction works; fixed choice
    else:
        u = u / nu
    a = np.array(
        [(1j * u[2 * k + 1] - u[2 * k + 2]) / 2 for k in range(3)], dtype=complex
    )
    g = exp_group(_horizontal_elem(a), psi)
    res = np.linalg.norm(g.m_real[:, 0] - y)
    if res > tol:
        g, res = _newton_refine(g, y, tol, max_newton)
    if res > tol:
        raise LiftConvergenceError(f"lift residual {res:.3e} exceeds {tol:.1e}")
    return g


def _newton_refine(g, y, tol, max_iter):
    """Damped Gauss-Newton on the 6 horizontal coordinates of the lift."""
    base = [b.to_float() for b in basis14()[:6]]
    res_vec = g.m_real[:, 0] - y
    res = np.linalg.norm(res_vec)
    for _ in range(max_iter):
        if res <= tol:
            break
        frame = g.frame()
        jac = np.stack([dx_ambient(frame, b.a).real for b in base], axis=1)  # 7x6
        step, *_ = np.linalg.lstsq(jac, -res_vec, rcond=None)
        damping = 1.0
        while damping > 1e-6:
            cand = np.zeros(3, dtype=complex)
            for k in range(3):
                cand[k] = damping * (step[2 * k] + 1j * step[2 * k + 1])
            g_new = g @ exp_group(_horizontal_elem(cand))
            new_vec = g_new.m_real[:, 0] - y
            if np.linalg.norm(new_vec) < res:
                g, res_vec, res = g_new, new_vec, np.linalg.norm(new_vec)
                break
            damping /= 2
        else:
            break
    return g, res


def dx_ambient(frame, a):
    """The differential of the orbit map: -2i f.a + 2i fbar.abar."""
    a = np.asarray(a)
    if backend_of(a) == EXACT:
        out = exact_zeros((7,))
        i2 = gq(0, 2)
        for k in range(3):
            out = out + (-i2) * a[k] * frame.f[k] + i2 * a[k].conjugate() * frame.f[k].conj()
        return out
    out = np.zeros(7, dtype=complex)
    for k in range(3):
        out = out - 2j * a[k] * frame.f[k] + 2j * np.conj(a[k]) * np.conj(frame.f[k])
    return out
