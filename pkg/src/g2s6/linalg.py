"""Dense complex linear algebra over both scalar backends.

Float-backend work is delegated to numpy/scipy; the exact backend gets
hand-rolled field-arithmetic routines (elimination, congruence
diagonalization) so that every structural identity can be checked with
residual exactly zero.
"""

import numpy as np
import scipy.linalg

from .scalars import EXACT, BackendError, backend_of, exact_eye, gq, same_backend

# Default tolerances: structural identities are checked to 1e-9 absolute on
# max-norm residuals, strict inequalities must clear a 1e-10 margin.
STRUCT_TOL = 1e-9
STRICT_MARGIN = 1e-10


def conj_t(m):
    """Conjugate transpose; an involution on both backends."""
    return m.conj().T


def max_abs(m):
    """Largest entry magnitude, as a float (works on both backends)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    if m.dtype == object:
        if all(not x for x in m.reshape(-1)):
            return 0.0
        return max(abs(x.to_complex()) for x in m.reshape(-1))
    return float(np.abs(m).max())


def is_zero(m):
    """Entrywise-zero test: exact on the exact backend."""
    m = np.asarray(m)
    if m.dtype == object:
        return all(not x for x in m.reshape(-1))
    return not np.any(m)


def _require_square(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")


def det(m):
    """Determinant; exact Gaussian elimination on the exact backend."""
    m = np.asarray(m)
    _require_square(m)
    if m.dtype != object:
        return complex(np.linalg.det(m))
    n = m.shape[0]
    a = [list(row) for row in m]
    result = gq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return gq(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        result = result * a[col][col]
        inv_piv = gq(1) / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv_piv
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col][c]
    return result


def inv(m):
    """Matrix inverse; exact Gauss-Jordan on the exact backend."""
    m = np.asarray(m)
    _require_square(m)
    if m.dtype != object:
        return np.linalg.inv(m)
    n = m.shape[0]
    a = [list(row) + list(eye_row) for row, eye_row in zip(m, exact_eye(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("exact matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        f = gq(1) / a[col][col]
        a[col] = [x * f for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                g = a[r][col]
                a[r] = [x - g * y for x, y in zip(a[r], a[col])]
    out = np.empty((n, n), dtype=object)
    for r in range(n):
        out[r, :] = a[r][n:]
    return out


def is_hermitian(m, tol=STRUCT_TOL):
    m = np.asarray(m)
    _require_square(m)
    if m.dtype == object:
        return max_abs(m - conj_t(m)) == 0.0
    return max_abs(m - conj_t(m)) <= tol


def is_positive_definite(m, tol=STRUCT_TOL, margin=STRICT_MARGIN):
    """Sylvester criterion: all leading principal minors positive.

    Works uniformly on both backends; float minors must clear `margin`.
    Raises on non-Hermitian input.
    """
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        raise ValueError("positive definiteness is only defined for Hermitian matrices")
    exact = m.dtype == object
    for k in range(1, m.shape[0] + 1):
        minor = det(m[:k, :k])
        if exact:
            if minor.im != 0:
                raise ValueError("Hermitian minor came out non-real (exact backend)")
            if minor.re <= 0:
                return False
        else:
            if abs(minor.imag) > tol:
                raise ValueError("Hermitian minor came out non-real beyond tolerance")
            if minor.real <= margin:
                return False
    return True


def hermitian_order_gt(a, b, tol=STRUCT_TOL, margin=STRICT_MARGIN):
    """A > B in the Hermitian order, i.e. A - B positive definite."""
    a = np.asarray(a)
    b = np.asarray(b)
    same_backend(a, b)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return is_positive_definite(a - b, tol, margin)


def det_order_check(a, b, tol=STRUCT_TOL, margin=STRICT_MARGIN):
    """For A > B > 0, check det A > det B > 0.

    The preconditions are enforced; the strict determinant inequalities are
    then evaluated on real parts (imaginary parts must vanish).  The library
    asserts this always returns True; the check is exposed for the suites.
    """
    if not hermitian_order_gt(a, b, tol, margin):
        raise ValueError("precondition A > B violated")
    if not is_positive_definite(np.asarray(b), tol, margin):
        raise ValueError("precondition B > 0 violated")
    da, db = det(np.asarray(a)), det(np.asarray(b))
    if backend_of(np.asarray(a)) == EXACT:
        if da.im != 0 or db.im != 0:
            raise ValueError("determinant of a Hermitian matrix must be real")
        return da.re > db.re > 0
    if abs(da.imag) > tol or abs(db.imag) > tol:
        raise ValueError("determinant imaginary part exceeds tolerance")
    return da.real - db.real > margin and db.real > margin


def matrix_exp(m):
    """Scaling-and-squaring matrix exponential (float backend only)."""
    m = np.asarray(m)
    _require_square(m)
    if m.dtype == object:
        raise BackendError("matrix exponential is transcendental; float backend required")
    return scipy.linalg.expm(np.asarray(m, dtype=complex))


def signature(m, tol=STRUCT_TOL, degeneracy_tol=STRICT_MARGIN):
    """Signature (p, q) of a Hermitian / real symmetric matrix.

    Float backend: eigenvalues; exact backend: diagonalization by congruence.
    An eigenvalue (or congruence pivot) at zero is an error -- the forms this
    library measures are assumed nondegenerate.
    """
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        raise ValueError("signature requires a Hermitian (or symmetric) matrix")
    if m.dtype == object:
        return _exact_signature(m)
    evals = np.linalg.eigvalsh(np.asarray(m, dtype=complex))
    if np.any(np.abs(evals) <= degeneracy_tol):
        raise ValueError("eigenvalue within the degeneracy tolerance of zero")
    return int((evals > 0).sum()), int((evals < 0).sum())


def _exact_signature(m):
    """Signature by Hermitian congruence M -> E* M E, pivot by pivot."""
    n = m.shape[0]
    a = [[x for x in row] for row in m]

    def add_into(k, j, lam):
        # column k += lam * column j, then row k += conj(lam) * row j
        lamc = lam.conjugate()
        for r in range(n):
            a[r][k] = a[r][k] + lam * a[r][j]
        for c in range(n):
            a[k][c] = a[k][c] + lamc * a[j][c]

    def swap(k, j):
        for r in range(n):
            a[r][k], a[r][j] = a[r][j], a[r][k]
        a[k], a[j] = a[j], a[k]

    pos = neg = 0
    for k in range(n):
        if not a[k][k]:
            j = next((r for r in range(k + 1, n) if a[r][r]), None)
            if j is not None:
                swap(k, j)
            else:
                pair = next(
                    ((r, c) for r in range(k, n) for c in range(r + 1, n) if a[r][c]),
                    None,
                )
                if pair is None:
                    raise ValueError("form is degenerate (exact backend)")
                r, c = pair
                if r != k:
                    swap(k, r)  # c > r >= k, so the nonzero lands at (k, c)
                # a[k][c] != 0 but the whole trailing diagonal vanishes; the
                # shear below makes the k-th diagonal entry 2|a[k][c]|^2 > 0
                add_into(k, c, a[k][c].conjugate())
        d = a[k][k]
        if d.im != 0:
            raise ValueError("Hermitian diagonal must be real")
        if d.re > 0:
            pos += 1
        else:
            neg += 1
        dinv = gq(1) / d
        for j in range(k + 1, n):
            if a[k][j]:
                add_into(j, k, -(a[k][j] * dinv))
    return pos, neg


def eigvalsh(m):
    """Hermitian eigenvalues (float backend only)."""
    m = np.asarray(m)
    if m.dtype == object:
        raise BackendError("eigenvalues need the float backend; convert explicitly")
    return np.linalg.eigvalsh(np.asarray(m, dtype=complex))
