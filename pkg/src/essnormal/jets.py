"""Truncated Taylor jets at a base point.

A :class:`Jet` stores Taylor coefficients ``a_k = h^(k)(base)/k!``; the
derivative-data vector ``(h(base), h'(base), ..., h^(n)(base))`` is
available through :meth:`Jet.derivatives`.  Composition is done by Horner
evaluation on truncated series, which is the numerically preferred route
to the Faa di Bruno formula.
"""

import math
from functools import lru_cache

import numpy as np

from .config import tolerances
from .errors import (
    ChainRuleBaseMismatch,
    NotLocallyInvertible,
    PoleAtBasePoint,
    ZeroConstantTerm,
)


class Jet:
    __slots__ = ("base", "taylor")

    def __init__(self, base, taylor):
        t = np.atleast_1d(np.asarray(taylor, dtype=complex)).copy()
        if t.ndim != 1 or t.size == 0:
            raise ValueError("taylor must be a non-empty 1-d sequence")
        t.setflags(write=False)
        object.__setattr__(self, "base", complex(base))
        object.__setattr__(self, "taylor", t)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @property
    def order(self):
        return self.taylor.size - 1

    @classmethod
    def from_derivatives(cls, base, derivs):
        d = np.asarray(derivs, dtype=complex)
        return cls(base, d / _factorials(d.size))

    @classmethod
    def identity(cls, base, order):
        t = np.zeros(order + 1, dtype=complex)
        t[0] = base
        if order >= 1:
            t[1] = 1.0
        return cls(base, t)

    @classmethod
    def constant(cls, base, value, order):
        t = np.zeros(order + 1, dtype=complex)
        t[0] = value
        return cls(base, t)

    def derivatives(self):
        """Derivative-data view ``D_n = (k! a_k)``."""
        return self.taylor * _factorials(self.taylor.size)

    @property
    def value(self):
        return complex(self.taylor[0])

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.base, self.taylor[: order + 1])

    def __repr__(self):
        return f"Jet(base={self.base!r}, taylor={np.round(self.taylor, 12).tolist()})"

    def to_json(self):
        from .ratfun import complex_pair

        return {
            "base": complex_pair(self.base),
            "taylor": [complex_pair(c) for c in self.taylor],
        }

    @classmethod
    def from_json(cls, obj):
        b = obj["base"]
        base = complex(b[0], b[1]) if isinstance(b, (list, tuple)) else complex(b)
        return cls(base, [complex(x[0], x[1]) for x in obj["taylor"]])


def _factorials(n):
    return np.array([math.factorial(k) for k in range(n)], dtype=float)


# -- series primitives ----------------------------------------------------


def series_mul(a, b, n):
    """Product of two coefficient arrays truncated to degree ``n``."""
    return np.convolve(a[: n + 1], b[: n + 1])[: n + 1]


def series_div(a, b, n):
    """Quotient ``a/b`` as a power series to degree ``n`` (requires b[0] != 0)."""
    a = np.pad(np.asarray(a, dtype=complex)[: n + 1], (0, max(0, n + 1 - len(a))))
    b = np.pad(np.asarray(b, dtype=complex)[: n + 1], (0, max(0, n + 1 - len(b))))
    c = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        c[k] = (a[k] - np.dot(b[1 : k + 1], c[:k][::-1])) / b[0]
    return c


def series_compose(f, h, n):
    """``f(h(t))`` truncated to degree ``n`` where ``h(0) = 0``."""
    out = np.zeros(n + 1, dtype=complex)
    for c in f[: n + 1][::-1]:
        out = series_mul(out, h, n)
        out[0] += c
    return out


def _same_base(j1, j2):
    if abs(j1.base - j2.base) > tolerances().base_match * max(1.0, abs(j1.base)):
        raise ValueError(f"jets at different base points {j1.base} and {j2.base}")
    n = min(j1.order, j2.order)
    return n


# -- operations -----------------------------------------------------------


def jet_of_rational(R, z0, n):
    """Taylor jet of the rational map ``R`` at ``z0`` to order ``n``."""
    z0 = complex(z0)
    num = R.num.shift(z0).coeffs
    den = R.den.shift(z0).coeffs
    scale = float(np.sum(np.abs(R.den.coeffs) * max(1.0, abs(z0)) ** np.arange(R.den.coeffs.size)))
    if abs(den[0]) <= tolerances().pole * scale:
        raise PoleAtBasePoint(f"{z0} is a pole")
    return Jet(z0, series_div(num, den, n))


def faa_di_bruno(f_jet, g_jet):
    """Jet of ``f ∘ g`` at ``g_jet.base`` given the jet of ``f`` at ``g(base)``."""
    g0 = g_jet.taylor[0]
    if abs(f_jet.base - g0) > tolerances().base_match * max(1.0, abs(g0)):
        raise ChainRuleBaseMismatch(f"outer jet based at {f_jet.base}, inner value {g0}")
    n = min(f_jet.order, g_jet.order)
    h = np.array(g_jet.taylor[: n + 1])
    h[0] = 0
    return Jet(g_jet.base, series_compose(f_jet.taylor, h, n))


def jet_add(j1, j2):
    n = _same_base(j1, j2)
    return Jet(j1.base, j1.taylor[: n + 1] + j2.taylor[: n + 1])


def jet_mul(j1, j2):
    n = _same_base(j1, j2)
    return Jet(j1.base, series_mul(j1.taylor, j2.taylor, n))


def jet_scale(j, c):
    return Jet(j.base, j.taylor * c)


def jet_reciprocal(j):
    if abs(j.taylor[0]) <= tolerances().zero:
        raise ZeroConstantTerm("reciprocal of a jet with vanishing constant term")
    one = np.zeros(j.order + 1, dtype=complex)
    one[0] = 1
    return Jet(j.base, series_div(one, j.taylor, j.order))


def jet_invert(j):
    """Jet of the local inverse: based at ``j(base)``, valued ``base`` there."""
    n = j.order
    a1 = j.taylor[1] if n >= 1 else 0
    if n < 1 or abs(a1) <= tolerances().zero:
        raise NotLocallyInvertible("first Taylor coefficient vanishes")
    h = np.array(j.taylor)
    h[0] = 0
    r = np.zeros(n + 1, dtype=complex)
    r[1] = 1 / a1
    for k in range(2, n + 1):
        r[k] -= series_compose(h, r, k)[k] / a1
    r[0] = j.base
    return Jet(j.taylor[0], r)


def first_nonreal_index(taylor, start=0):
    """Index of the first coefficient with a non-negligible imaginary part, or None.

    "Negligible" is relative to the largest coefficient seen so far, since
    rounding in vanishing coefficients grows with the size of the others.
    """
    tol = tolerances()
    scale = 0.0
    for k in range(len(taylor)):
        c = taylor[k]
        scale = max(scale, abs(c))
        if k >= start and abs(c.imag) > max(tol.real * scale, tol.real_abs):
            return k
    return None


# -- combinatorial form ---------------------------------------------------


@lru_cache(maxsize=None)
def _block_profiles(k):
    """Integer partitions of k with the number of set partitions realizing each."""
    out = []

    def rec(remaining, largest, parts):
        if remaining == 0:
            count = math.factorial(k)
            for s in parts:
                count //= math.factorial(s)
            for s in set(parts):
                count //= math.factorial(parts.count(s))
            out.append((tuple(parts), count))
            return
        for s in range(min(remaining, largest), 0, -1):
            rec(remaining - s, s, parts + [s])

    rec(k, k, [])
    return tuple(out)


def middle_term_F(a, b):
    """Partition-sum over 1 < |pi| < k with derivative data ``a`` (outer) and ``b`` (inner).

    ``a`` and ``b`` are length-``k`` vectors ``(h(z), h'(z), ..., h^(k-1)(z))``.
    Partitions sharing a block-size profile contribute identically, so the
    sum runs over integer partitions weighted by their set-partition counts.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    k = a.size
    if b.size != k:
        raise ValueError("data vectors must have equal length")
    if k < 2:
        raise ValueError("need k >= 2")
    total = 0j
    for parts, count in _block_profiles(k):
        if 1 < len(parts) < k:
            total += count * a[len(parts)] * np.prod([b[s] for s in parts])
    return complex(total)
