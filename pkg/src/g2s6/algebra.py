"""The 14-dimensional matrix model of the exceptional Lie algebra g2.

Elements are parametrized by a pair (a, D) with a in C^3 and D in su(3),
embedded into C^{7x7} as the block matrix

        (   0    -i a*   i a^t )
        ( -2i a    D     [abar])
        ( 2i abar  [a]    Dbar )

written in the split basis (e1, F1, F2, F3, F1bar, F2bar, F3bar).  The fixed
real basis `basis14` has Gaussian-rational entries, so brackets, structure
constants and the Killing form are all exact.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .forms import MultiForm
from .scalars import (
    EXACT,
    FLOAT,
    abs_value,
    backend_of,
    canonical,
    exact_zeros,
    gq,
    same_backend,
    to_float_array,
)

DIM = 14


class ConsistencyError(RuntimeError):
    """An identity the model guarantees failed; indicates an internal bug."""


def _zeros(shape, backend):
    return exact_zeros(shape) if backend == EXACT else np.zeros(shape, dtype=complex)


def cross_matrix(a):
    """The hat matrix [a] = ((0, a3, -a2), (-a3, 0, a1), (a2, -a1, 0))."""
    a = np.asarray(a)
    m = _zeros((3, 3), backend_of(a))
    m[0, 1] = a[2]
    m[0, 2] = -a[1]
    m[1, 0] = -a[2]
    m[1, 2] = a[0]
    m[2, 0] = a[1]
    m[2, 1] = -a[0]
    return m


class G2AlgebraElem:
    """A Lie algebra element, stored as the pair (a, D)."""

    __slots__ = ("a", "D", "backend")

    def __init__(self, a, D, check=True):
        self.a = np.asarray(a)
        self.D = np.asarray(D)
        self.backend = same_backend(self.a, self.D)
        if self.a.shape != (3,) or self.D.shape != (3, 3):
            raise ValueError("need a in C^3 and D a 3x3 matrix")
        if check:
            skew = self.D + linalg.conj_t(self.D)
            tr = self.D[0, 0] + self.D[1, 1] + self.D[2, 2]
            if self.backend == EXACT:
                bad = not linalg.is_zero(skew) or tr != 0
            else:
                bad = linalg.max_abs(skew) > linalg.STRUCT_TOL or abs(tr) > linalg.STRUCT_TOL
            if bad:
                raise ValueError("D is not skew-Hermitian traceless (not in su(3))")

    @classmethod
    def zero(cls, backend=EXACT):
        return cls(_zeros((3,), backend), _zeros((3, 3), backend), check=False)

    def __add__(self, other):
        return G2AlgebraElem(self.a + other.a, self.D + other.D, check=False)

    def __sub__(self, other):
        return G2AlgebraElem(self.a - other.a, self.D - other.D, check=False)

    def __neg__(self):
        return G2AlgebraElem(-self.a, -self.D, check=False)

    def scale(self, t):
        """Scale by a real number (real span: t complex would leave su(3))."""
        return G2AlgebraElem(t * self.a, t * self.D, check=False)

    def to_float(self):
        if self.backend == FLOAT:
            return self
        return G2AlgebraElem(to_float_array(self.a), to_float_array(self.D), check=False)

    def __repr__(self):
        return f"G2AlgebraElem(a={self.a!r}, D={self.D!r})"


def embed_algebra(el):
    """The 7x7 matrix of an algebra element in the split basis."""
    backend = el.backend
    i2 = gq(0, 2) if backend == EXACT else 2j
    i1 = gq(0, 1) if backend == EXACT else 1j
    m = _zeros((7, 7), backend)
    a, D = el.a, el.D
    ab = a.conj()
    m[0, 1:4] = -i1 * ab
    m[0, 4:7] = i1 * a
    m[1:4, 0] = -i2 * a
    m[4:7, 0] = i2 * ab
    m[1:4, 1:4] = D
    m[1:4, 4:7] = cross_matrix(ab)
    m[4:7, 1:4] = cross_matrix(a)
    m[4:7, 4:7] = D.conj()
    return m


def project_algebra(m, tol=linalg.STRUCT_TOL):
    """Invert `embed_algebra`; error if the matrix is not in g2.

    The candidate (a, D) is read off the first column and middle block; the
    reconstruction residual must vanish (exactly for the exact backend).
    """
    m = np.asarray(m)
    if m.shape != (7, 7):
        raise ValueError("expected a 7x7 matrix")
    backend = backend_of(m)
    if backend == EXACT:
        half_i = gq(0, Fraction(1, 2))
        a = np.array([canonical(half_i * x) for x in m[1:4, 0]], dtype=object)
    else:
        a = 0.5j * m[1:4, 0]
    D = m[1:4, 1:4].copy()
    try:
        el = G2AlgebraElem(a, D)
    except ValueError as exc:
        raise ConsistencyError(f"matrix is not in g2: {exc}") from exc
    diff = m - embed_algebra(el)
    if backend == EXACT:
        if not linalg.is_zero(diff):
            raise ConsistencyError("matrix is not in g2 (exact reconstruction residual)")
    elif linalg.max_abs(diff) > tol:
        raise ConsistencyError(
            f"matrix is not in g2 (reconstruction residual {linalg.max_abs(diff):.3e})"
        )
    return el


def bracket(x, y):
    """Lie bracket via the 7x7 commutator of the embeddings.

    Closure of the model guarantees the projection residual is exactly zero;
    a nonzero residual raises ConsistencyError.
    """
    mx, my = embed_algebra(x), embed_algebra(y)
    return project_algebra(mx @ my - my @ mx)


def _su3_basis():
    """Traceless skew-Hermitian 3x3 matrices with Gaussian-integer entries."""
    out = []
    for (j, k) in [(0, 1), (0, 2), (1, 2)]:
        s = exact_zeros((3, 3))
        s[j, k] = gq(1)
        s[k, j] = gq(-1)
        out.append(s)
    for (j, k) in [(0, 1), (0, 2), (1, 2)]:
        s = exact_zeros((3, 3))
        s[j, k] = gq(0, 1)
        s[k, j] = gq(0, 1)
        out.append(s)
    s = exact_zeros((3, 3))
    s[0, 0] = gq(0, 1)
    s[1, 1] = gq(0, -1)
    out.append(s)
    s = exact_zeros((3, 3))
    s[1, 1] = gq(0, 1)
    s[2, 2] = gq(0, -1)
    out.append(s)
    return out


@lru_cache(maxsize=1)
def basis14():
    """The fixed real basis of g2: 14 exact elements.

    Order: a = e1, i e1, e2, i e2, e3, i e3 with D = 0 (the horizontal part,
    paired so that multiplication by i on a is the block rotation), then the
    eight su(3) generators with a = 0.
    """
    out = []
    for k in range(3):
        for unit in (gq(1), gq(0, 1)):
            a = exact_zeros((3,))
            a[k] = unit
            out.append(G2AlgebraElem(a, exact_zeros((3, 3)), check=False))
    for s in _su3_basis():
        out.append(G2AlgebraElem(exact_zeros((3,)), s, check=False))
    return out


def coords14(el):
    """Real coordinates of an element in `basis14` (exact for exact input)."""
    a, D = el.a, el.D
    if el.backend == EXACT:
        c = np.empty(14, dtype=object)
        re, im = (lambda z: z.re), (lambda z: z.im)
    else:
        c = np.empty(14, dtype=float)
        re, im = (lambda z: z.real), (lambda z: z.imag)
    for k in range(3):
        c[2 * k] = re(a[k])
        c[2 * k + 1] = im(a[k])
    c[6] = re(D[0, 1])
    c[7] = re(D[0, 2])
    c[8] = re(D[1, 2])
    c[9] = im(D[0, 1])
    c[10] = im(D[0, 2])
    c[11] = im(D[1, 2])
    c[12] = im(D[0, 0])
    c[13] = -im(D[2, 2])
    return c


def from_coords14(c):
    """The element with the given real coordinates in `basis14`."""
    c = np.asarray(c)
    exact = backend_of(c) == EXACT
    base = basis14() if exact else [b.to_float() for b in basis14()]
    out = G2AlgebraElem.zero(EXACT if exact else FLOAT)
    for x, b in zip(c, base):
        if x:
            out = out + b.scale(x)
    return out


@lru_cache(maxsize=1)
def _structure_constants():
    """brackets[i][j] = coords14([b_i, b_j]), exact."""
    base = basis14()
    zero = np.empty(14, dtype=object)
    zero[:] = [Fraction(0)] * 14
    table = [[zero] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i + 1, DIM):
            c = coords14(bracket(base[i], base[j]))
            table[i][j] = c
            table[j][i] = -c
    return table


def bracket_coords(i, j):
    """Coordinates of [b_i, b_j]; the bracket hook for left_invariant_d."""
    return _structure_constants()[i][j]


def ad_matrix(i):
    """ad_{b_i} as an exact 14x14 matrix in basis14 coordinates."""
    t = _structure_constants()
    m = np.empty((14, 14), dtype=object)
    for j in range(DIM):
        m[:, j] = t[i][j]
    return m


def _ad_from_coords(c):
    """ad of the element with coordinates c, as a nested list: ad[k][j]."""
    t = _structure_constants()
    zero = Fraction(0) if backend_of(np.asarray(c)) == EXACT else 0.0
    ad = [[zero] * DIM for _ in range(DIM)]
    for i in range(DIM):
        if not c[i]:
            continue
        for j in range(DIM):
            col = t[i][j]
            for k in range(DIM):
                if col[k]:
                    ad[k][j] = ad[k][j] + c[i] * col[k]
    return ad


def killing_form(x, y):
    """trace(ad_x ad_y) in basis14 coordinates; exact on exact input."""
    same_backend(x.a, y.a)
    adx = _ad_from_coords(coords14(x))
    ady = _ad_from_coords(coords14(y))
    total = Fraction(0) if x.backend == EXACT else 0.0
    for j in range(DIM):
        for k in range(DIM):
            if adx[k][j] and ady[j][k]:
                total += adx[k][j] * ady[j][k]
    return total


@lru_cache(maxsize=1)
def killing_gram():
    """The exact 14x14 Killing Gram matrix over basis14."""
    ads = [ad_matrix(i) for i in range(DIM)]
    g = np.empty((14, 14), dtype=object)
    for i in range(DIM):
        for j in range(i, DIM):
            tr = Fraction(0)
            for r in range(DIM):
                for c in range(DIM):
                    tr += ads[i][r, c] * ads[j][c, r]
            g[i, j] = gq(tr)
            g[j, i] = gq(tr)
    return g


_UNIT_SCALE_SQ = (1, 2, 2, 2, 2, 2, 2)  # squared norms of (e1, F, Fbar) basis


def skew_hermitian_residual(el):
    """Deviation of the embedding from skew-Hermitian in the unit-norm basis.

    Rescaling F_k to unit vectors turns the embedded matrix M into
    T^{-1} M T with T = diag(1, sqrt(2) I_6); skew-Hermitian-ness of the
    rescaled matrix is equivalent to the rational condition
    M_ij t_j^2 + conj(M_ji) t_i^2 = 0, which is what is measured (exactly,
    for exact elements).
    """
    m = embed_algebra(el)
    worst = 0.0
    for i in range(7):
        for j in range(7):
            val = m[i, j] * _UNIT_SCALE_SQ[j] + m[j, i].conjugate() * _UNIT_SCALE_SQ[i]
            worst = max(worst, abs_value(val))
    return worst


def theta(el):
    """The C^3 component of an algebra element (the horizontal part)."""
    return el.a.copy()


def kappa(el):
    """The su(3) component of an algebra element (the vertical part)."""
    return el.D.copy()


@lru_cache(maxsize=1)
def theta_form():
    """theta as an exact column-vector-valued 1-form on basis14 coordinates."""
    vals = [np.asarray(theta(b)).reshape(3, 1) for b in basis14()]
    return MultiForm.one_form(DIM, vals)


@lru_cache(maxsize=1)
def kappa_form():
    """kappa as an exact matrix-valued 1-form on basis14 coordinates."""
    return MultiForm.one_form(DIM, [kappa(b) for b in basis14()])


@lru_cache(maxsize=1)
def phi_form():
    """The Maurer-Cartan form in left-invariant coordinates: 7x7 values."""
    return MultiForm.one_form(DIM, [embed_algebra(b) for b in basis14()])
