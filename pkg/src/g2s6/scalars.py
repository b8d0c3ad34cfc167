"""Dual-backend complex scalars.

Every quantity in this library lives in one of two arithmetic backends:

* ``exact``  -- Gaussian rationals a + b*i with a, b rational, closed under
  field operations, so algebraic identities can be checked with residual
  exactly zero;
* ``float``  -- ordinary ``complex`` double precision, used wherever the
  matrix exponential or eigenvalues are required.

Arrays carry the backend in their dtype: ``object`` arrays hold
:class:`GaussianRational` entries, inexact dtypes are the float backend.
Mixing the two in one expression raises :class:`BackendError` instead of
silently coercing.
"""

from fractions import Fraction
import numbers

import numpy as np

EXACT = "exact"
FLOAT = "float"


class BackendError(TypeError):
    """Exact and float values met in a single arithmetic expression."""


def _as_rational(x):
    # ints stay ints: their arithmetic is much faster than Fraction's and
    # promotes to Fraction exactly when needed
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x)
    raise BackendError(
        f"cannot build an exact scalar from {type(x).__name__}; "
        "use the float backend for inexact values"
    )


def _ratio(num, den):
    # exact division of two rationals (int / int must not become a float)
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


class GaussianRational:
    """A complex number with rational real and imaginary parts.

    Arithmetic with ``int`` and ``Fraction`` promotes; any contact with a
    float or complex value raises :class:`BackendError`.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_rational(re)
        self.im = _as_rational(im)

    @classmethod
    def _make(cls, re, im):
        # fast path for arithmetic results: components are known-rational
        out = object.__new__(cls)
        out.re = re
        out.im = im
        return out

    # -- promotion ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational._make(other, 0)
        if isinstance(other, np.integer):
            return GaussianRational._make(int(other), 0)
        if isinstance(other, numbers.Rational):
            return GaussianRational._make(Fraction(other), 0)
        if isinstance(other, (float, complex, np.inexact)):
            raise BackendError(
                "exact scalar combined with an inexact value; "
                "convert explicitly with to_float_array / to_complex"
            )
        return None

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational._make(
            _ratio(self.re * o.re + self.im * o.im, n),
            _ratio(self.im * o.re - self.re * o.im, n),
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        out = GaussianRational(1)
        base = self
        n = int(n)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def abs2(self):
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        if self.im == 0:
            return f"gq({self.re})"
        return f"gq({self.re}, {self.im})"


def gq(re=0, im=0):
    """Shorthand constructor for exact scalars."""
    return GaussianRational(re, im)


def _canon_rational(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def canonical(z):
    """Collapse denominator-1 Fractions back to ints (keeps arithmetic fast)."""
    return GaussianRational._make(_canon_rational(z.re), _canon_rational(z.im))


I = gq(0, 1)
ZERO = gq(0)
ONE = gq(1)


# -- array helpers ----------------------------------------------------------


def backend_of(arr):
    """Backend tag of a numpy array (or bare scalar)."""
    if isinstance(arr, GaussianRational):
        return EXACT
    if isinstance(arr, np.ndarray):
        return EXACT if arr.dtype == object else FLOAT
    if isinstance(arr, (complex, float, np.inexact)):
        return FLOAT
    raise TypeError(f"no backend for {type(arr).__name__}")


def is_exact(arr):
    return backend_of(arr) == EXACT


def same_backend(*arrs):
    tags = {backend_of(a) for a in arrs}
    if len(tags) > 1:
        raise BackendError("operands live in different scalar backends")
    return tags.pop()


def _to_gq(x):
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


def exact_array(data):
    """Build an object-dtype array of GaussianRational from nested lists.

    Entries may be int, Fraction, GaussianRational, or (re, im) handled via
    gq() by the caller.  Inexact entries raise.
    """
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for k in range(flat.size):
        flat[k] = _to_gq(flat[k])
    return arr


def exact_zeros(shape):
    arr = np.empty(shape, dtype=object)
    arr.reshape(-1)[:] = [gq(0)] * arr.size
    return arr


def exact_eye(n):
    arr = exact_zeros((n, n))
    for k in range(n):
        arr[k, k] = gq(1)
    return arr


def to_float_array(arr):
    """Convert an exact array (or scalar) to the float backend."""
    if isinstance(arr, GaussianRational):
        return arr.to_complex()
    if isinstance(arr, np.ndarray) and arr.dtype == object:
        out = np.empty(arr.shape, dtype=complex)
        out.reshape(-1)[:] = [x.to_complex() for x in arr.reshape(-1)]
        return out
    return np.asarray(arr, dtype=complex)


def abs_value(x):
    """Magnitude of a scalar from either backend, as a float (for reports)."""
    if isinstance(x, GaussianRational):
        return abs(x.to_complex())
    return abs(complex(x))
