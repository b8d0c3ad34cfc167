"""Alternating multilinear forms on a fixed real evaluation space.

A :class:`MultiForm` of degree k stores its values on strictly increasing
k-tuples of basis indices; evaluation on arbitrary vectors is multilinear
extension.  Values may be scalars, vectors or matrices -- internally always
2-d arrays, with scalars as shape (1, 1) and column vectors as (n, 1).

Wedge convention (shared by every identity this library checks): the shuffle
sum with signs and NO 1/k! normalization, so for 1-forms

    (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X),

with matrix multiplication combining the values.  The left-invariant
exterior differential uses

    (d a)(X_0, ..., X_k) = sum_{i<j} (-1)^{i+j} a([X_i, X_j], ..no X_i, X_j..),

whose k=1 case d a(X, Y) = -a([X, Y]) pairs with the wedge convention to
make the Maurer-Cartan identity come out as d(phi) = -phi ^ phi.
"""

from itertools import combinations

import numpy as np

from . import linalg
from .scalars import (
    EXACT,
    FLOAT,
    backend_of,
    exact_array,
    exact_eye,
    exact_zeros,
    gq,
    same_backend,
    to_float_array,
)


def _zeros(shape, backend):
    if backend == EXACT:
        return exact_zeros(shape)
    return np.zeros(shape, dtype=complex)


def _compose(x, y):
    """Combine two form values: scalar-times-anything or matrix product."""
    if x.shape == (1, 1):
        return x[0, 0] * y
    if y.shape == (1, 1):
        return y[0, 0] * x
    if x.shape[1] != y.shape[0]:
        raise ValueError(f"value shapes {x.shape} and {y.shape} do not compose")
    return x @ y


def _merge_sign(idx_a, idx_b):
    """Sign of merging two disjoint increasing tuples, or 0 if they meet."""
    sign = 1
    for a in idx_a:
        for b in idx_b:
            if a == b:
                return None, 0
            if a > b:
                sign = -sign
    return tuple(sorted(idx_a + idx_b)), sign


def _sort_sign(idx):
    """Sorted tuple and permutation sign; 0 on repeated indices."""
    idx = tuple(idx)
    for k, v in enumerate(idx):
        for w in idx[k + 1 :]:
            if v == w:
                return None, 0
    sign = 1
    lst = list(idx)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return tuple(lst), sign


class MultiForm:
    """Alternating k-linear map with scalar, vector or matrix values."""

    __slots__ = ("degree", "dim", "shape", "backend", "coeffs")

    def __init__(self, degree, dim, shape, backend, coeffs=None):
        self.degree = int(degree)
        self.dim = int(dim)
        self.shape = tuple(shape)
        self.backend = backend
        self.coeffs = {}
        if coeffs:
            for idx, val in coeffs.items():
                self[idx] = val

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, degree, dim, shape=(1, 1), backend=EXACT):
        return cls(degree, dim, shape, backend)

    @classmethod
    def one_form(cls, dim, values, shape=None):
        """Degree-1 form from its list of values on the basis."""
        values = [np.asarray(v) for v in values]
        if len(values) != dim:
            raise ValueError("need one value per basis vector")
        if shape is None:
            shape = values[0].shape
        backend = same_backend(*values)
        f = cls(1, dim, shape, backend)
        for j, v in enumerate(values):
            f[(j,)] = v
        return f

    @classmethod
    def coordinate(cls, dim, j, backend=EXACT):
        """The scalar 1-form extracting the j-th coordinate."""
        one = exact_array([[1]]) if backend == EXACT else np.ones((1, 1), complex)
        return cls(1, dim, (1, 1), backend, {(j,): one})

    def copy(self):
        return MultiForm(self.degree, self.dim, self.shape, self.backend,
                         {k: v.copy() for k, v in self.coeffs.items()})

    # -- coefficient access --------------------------------------------------

    def __setitem__(self, idx, val):
        idx = tuple(idx)
        if len(idx) != self.degree or sorted(idx) != list(idx) or len(set(idx)) != len(idx):
            raise ValueError(f"index {idx} is not a strictly increasing {self.degree}-tuple")
        val = np.asarray(val)
        if val.shape != self.shape:
            raise ValueError(f"value shape {val.shape} != form shape {self.shape}")
        self.coeffs[idx] = val

    def __getitem__(self, idx):
        """Value on a basis tuple in any order (sign-adjusted); 0 on repeats."""
        key, sign = _sort_sign(idx)
        if sign == 0 or key not in self.coeffs:
            return _zeros(self.shape, self.backend)
        v = self.coeffs[key]
        return v if sign == 1 else -v

    def keys(self):
        return self.coeffs.keys()

    # -- linear structure ----------------------------------------------------

    def _check_compatible(self, other):
        if (self.degree, self.dim, self.shape) != (other.degree, other.dim, other.shape):
            raise ValueError("forms have different degree, dimension or value shape")
        if self.backend != other.backend:
            raise ValueError("forms live in different backends")

    def __add__(self, other):
        self._check_compatible(other)
        out = self.copy()
        for idx, val in other.coeffs.items():
            out.coeffs[idx] = out.coeffs.get(idx, _zeros(self.shape, self.backend)) + val
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MultiForm(self.degree, self.dim, self.shape, self.backend,
                         {k: -v for k, v in self.coeffs.items()})

    def scale(self, c):
        return MultiForm(self.degree, self.dim, self.shape, self.backend,
                         {k: c * v for k, v in self.coeffs.items()})

    def conj(self):
        """Complex conjugate (values only; evaluation vectors stay real)."""
        return MultiForm(self.degree, self.dim, self.shape, self.backend,
                         {k: v.conj() for k, v in self.coeffs.items()})

    def transpose(self):
        return MultiForm(self.degree, self.dim, (self.shape[1], self.shape[0]),
                         self.backend, {k: v.T for k, v in self.coeffs.items()})

    def imag_part(self):
        """(alpha - conj(alpha)) / 2i, the imaginary part as a form."""
        half_i = gq(0, -1) / gq(2) if self.backend == EXACT else -0.5j
        return (self - self.conj()).scale(half_i)

    def map_values(self, fn, new_shape):
        """Apply a linear map to every value (e.g. a vector-to-matrix hat map)."""
        out = MultiForm(self.degree, self.dim, tuple(new_shape), self.backend)
        for idx, val in self.coeffs.items():
            out[idx] = fn(val)
        return out

    def is_zero(self):
        return all(linalg.max_abs(v) == 0.0 for v in self.coeffs.values())

    def max_abs(self):
        """Largest value magnitude over the stored table, as a float."""
        if not self.coeffs:
            return 0.0
        return max(linalg.max_abs(v) for v in self.coeffs.values())

    def residual(self, other):
        return (self - other).max_abs()

    def to_float(self):
        if self.backend == FLOAT:
            return self
        return MultiForm(self.degree, self.dim, self.shape, FLOAT,
                         {k: to_float_array(v) for k, v in self.coeffs.items()})

    # -- evaluation ----------------------------------------------------------

    def __call__(self, *vectors):
        """Evaluate on `degree` coordinate vectors (multilinear extension).

        Scalar-valued results are returned unwrapped.
        """
        if len(vectors) != self.degree:
            raise ValueError(f"need {self.degree} arguments, got {len(vectors)}")
        vectors = [np.asarray(v) for v in vectors]
        out = _zeros(self.shape, self.backend)
        k = self.degree
        for idx, val in self.coeffs.items():
            # minor of the argument coordinates at rows `idx`
            sub = np.empty((k, k), dtype=object if self.backend == EXACT else complex)
            for a, i in enumerate(idx):
                for b in range(k):
                    sub[a, b] = vectors[b][i]
            out = out + linalg.det(sub) * val
        if self.shape == (1, 1):
            return out[0, 0]
        return out

    def eval_mixed(self, vec, rest):
        """Evaluate with one arbitrary vector in slot 0 and basis indices after."""
        out = _zeros(self.shape, self.backend)
        for c in range(self.dim):
            x = vec[c]
            if not x:
                continue
            out = out + x * self[(c,) + tuple(rest)]
        return out


def wedge(a, b):
    """Shuffle-sum wedge product; matrix values multiply."""
    if a.dim != b.dim:
        raise ValueError("forms live on evaluation spaces of different dimension")
    if a.backend != b.backend:
        raise ValueError("wedge across backends")
    probe = _compose(_zeros(a.shape, a.backend), _zeros(b.shape, b.backend))
    out = MultiForm(a.degree + b.degree, a.dim, probe.shape, a.backend)
    for ia, va in a.coeffs.items():
        for ib, vb in b.coeffs.items():
            key, sign = _merge_sign(ia, ib)
            if sign == 0:
                continue
            term = _compose(va, vb)
            if sign < 0:
                term = -term
            if key in out.coeffs:
                out.coeffs[key] = out.coeffs[key] + term
            else:
                out.coeffs[key] = term
    return out


def wedge_all(*forms):
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def left_invariant_d(alpha, bracket_coords):
    """Exterior differential of a left-invariant form.

    `bracket_coords(i, j)` must return the coordinates of the bracket of the
    i-th and j-th basis vectors of the evaluation space.
    """
    if bracket_coords is None:
        raise ValueError("a bracket on the evaluation space is required")
    k = alpha.degree
    out = MultiForm(k + 1, alpha.dim, alpha.shape, alpha.backend)
    for idx in combinations(range(alpha.dim), k + 1):
        val = _zeros(alpha.shape, alpha.backend)
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                rest = idx[:a] + idx[a + 1 : b] + idx[b + 1 :]
                term = alpha.eval_mixed(bracket_coords(idx[a], idx[b]), rest)
                if (a + b) % 2:
                    val = val - term
                else:
                    val = val + term
        if linalg.max_abs(val) != 0.0:
            out[idx] = val
    return out


# -- complex splittings and (p, q) types --------------------------------------


class Splitting:
    """A splitting of the complexified evaluation space into conjugate halves.

    `basis10` holds the (1,0) basis vectors as columns of a (2n, n) array;
    the (0,1) subspace is its componentwise conjugate.
    """

    def __init__(self, basis10):
        basis10 = np.asarray(basis10)
        if basis10.ndim != 2 or basis10.shape[0] != 2 * basis10.shape[1]:
            raise ValueError("basis10 must be a (2n, n) array of column vectors")
        self.basis10 = basis10
        self.backend = backend_of(basis10)
        self.n = basis10.shape[1]
        full = self.full_basis()
        if self.backend == EXACT:
            if not linalg.det(full):
                raise ValueError("the two subspaces are not complementary")
        elif abs(linalg.det(full)) < 1e-12:
            raise ValueError("the two subspaces are not complementary (numerically)")

    @classmethod
    def standard(cls, n, backend=EXACT):
        """w_k = e_{2k} - i e_{2k+1}: the coordinate-pair splitting of R^{2n}."""
        cols = []
        for k in range(n):
            if backend == EXACT:
                col = exact_zeros((2 * n,))
                col[2 * k] = gq(1)
                col[2 * k + 1] = gq(0, -1)
            else:
                col = np.zeros(2 * n, dtype=complex)
                col[2 * k] = 1
                col[2 * k + 1] = -1j
            cols.append(col)
        return cls(np.stack(cols, axis=1))

    def full_basis(self):
        """(2n, 2n): the (1,0) columns followed by their conjugates."""
        return np.concatenate([self.basis10, self.basis10.conj()], axis=1)

    def dual_rows(self):
        """Rows of the inverse full basis: dual 1-form coordinates."""
        return linalg.inv(self.full_basis())

    def conjugate_swap(self):
        """The splitting with the two halves exchanged."""
        return Splitting(self.basis10.conj())

    def dual_form(self, a):
        """The 1-form z^a dual to the a-th (1,0) basis vector (0 <= a < 2n
        reaches the conjugate duals as well)."""
        rows = self.dual_rows()
        f = MultiForm(1, 2 * self.n, (1, 1), self.backend)
        for j in range(2 * self.n):
            arr = np.empty((1, 1), dtype=object if self.backend == EXACT else complex)
            arr[0, 0] = rows[a, j]
            f[(j,)] = arr
        return f


def type_project(alpha, split, p, q):
    """The (p, q)-component of a complex k-form with respect to a splitting.

    Components over all p + q = k sum back to alpha exactly.
    """
    if p + q != alpha.degree:
        raise ValueError(f"p + q = {p + q} does not match degree {alpha.degree}")
    if alpha.dim != 2 * split.n:
        raise ValueError("splitting dimension does not match the form")
    k = alpha.degree
    full = split.full_basis()
    dual = split.dual_rows()
    out = MultiForm(k, alpha.dim, alpha.shape, alpha.backend)
    cols = [full[:, j] for j in range(2 * split.n)]
    for K in combinations(range(2 * split.n), k):
        if sum(1 for a in K if a < split.n) != p:
            continue
        c_K = alpha(*[cols[a] for a in K])
        if alpha.shape == (1, 1):
            wrapped = _zeros((1, 1), alpha.backend)
            wrapped[0, 0] = c_K
            c_K = wrapped
        if linalg.max_abs(c_K) == 0.0:
            continue
        for I in combinations(range(alpha.dim), k):
            sub = dual[np.ix_(K, I)]
            d = linalg.det(sub)
            if d == 0:
                continue
            term = d * c_K
            if I in out.coeffs:
                out.coeffs[I] = out.coeffs[I] + term
            else:
                out.coeffs[I] = term
    return out


def from_splitting(split):
    """The real structure J with the splitting as its (+i, -i) eigenspaces.

    J(v) = i v^{1,0} - i v^{0,1}; the result is a real (2n, 2n) matrix with
    J^2 = -I.
    """
    n2 = 2 * split.n
    full = split.full_basis()
    dual = split.dual_rows()
    if split.backend == EXACT:
        d = exact_zeros((n2, n2))
        for a in range(split.n):
            d[a, a] = gq(0, 1)
            d[split.n + a, split.n + a] = gq(0, -1)
    else:
        d = np.diag([1j] * split.n + [-1j] * split.n)
    j_mat = full @ d @ dual
    if split.backend == EXACT:
        for x in j_mat.reshape(-1):
            if x.im != 0:
                raise ValueError("splitting is not conjugate-symmetric: J came out complex")
        j2 = j_mat @ j_mat
        if linalg.max_abs(j2 + exact_eye(n2)) != 0.0:
            raise ValueError("J^2 != -I; the splitting halves are not complementary conjugates")
        return j_mat
    if linalg.max_abs(j_mat.imag) > 1e-10:
        raise ValueError("splitting is not conjugate-symmetric: J came out complex")
    j_real = j_mat.real
    if linalg.max_abs(j_real @ j_real + np.eye(n2)) > 1e-10:
        raise ValueError("J^2 != -I; the splitting halves are not complementary conjugates")
    return j_real


def omega_from_hermitian(h, split):
    """The 2-form i h_{ab} z^a wedge conj(z)^b for Hermitian h.

    Real-valued on real vectors; returned as a scalar-valued MultiForm on the
    underlying real space.
    """
    h = np.asarray(h)
    if not linalg.is_hermitian(h):
        raise ValueError("coefficient matrix must be Hermitian")
    if h.shape != (split.n, split.n):
        raise ValueError("coefficient matrix size must match the splitting")
    n = split.n
    i_unit = gq(0, 1) if split.backend == EXACT else 1j
    out = MultiForm(2, 2 * n, (1, 1), split.backend)
    duals = [split.dual_form(a) for a in range(2 * n)]
    for a in range(n):
        for b in range(n):
            coeff = i_unit * h[a, b]
            if coeff == 0:
                continue
            out = out + wedge(duals[a], duals[n + b]).scale(coeff)
    if out.residual(out.conj()) != 0.0 and split.backend == EXACT:
        raise ValueError("form is not real-valued on real vectors")
    if split.backend == FLOAT and out.residual(out.conj()) > 1e-9:
        raise ValueError("form is not real-valued on real vectors (numerically)")
    return out
