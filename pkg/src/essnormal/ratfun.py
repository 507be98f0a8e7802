"""Rational functions with complex double-precision coefficients.

Polynomials are stored in ascending degree order, as in
:mod:`numpy.polynomial.polynomial`, whose routines do the arithmetic.
A :class:`RationalMap` is always kept reduced (common roots of numerator
and denominator cancelled by root matching) and normalized so that the
denominator is monic.
"""

import numpy as np
from numpy.polynomial import polynomial as npoly

from .config import tolerances
from .errors import (
    DegenerateLFT,
    DegenerateMap,
    InvalidUnimodular,
    NumericalFailure,
    PoleCollision,
)

_NOISE = 8 * np.finfo(float).eps


def _as_coeffs(c):
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).copy()
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    return arr


def _trim(arr, rel=0.0):
    if arr.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(arr))
    cut = rel * scale
    n = arr.size
    while n > 1 and abs(arr[n - 1]) <= cut:
        n -= 1
    if n == 1 and abs(arr[0]) <= cut:
        return np.zeros(1, dtype=complex)
    return arr[:n]


class Poly:
    """Polynomial with complex coefficients, ascending degree order."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=(0,), trim=_NOISE):
        c = _trim(_as_coeffs(coeffs), trim)
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        """Degree; the zero polynomial has degree -1."""
        return -1 if self.is_zero() else self._c.size - 1

    def is_zero(self):
        return self._c.size == 1 and self._c[0] == 0

    @property
    def lead(self):
        return self._c[-1]

    def __call__(self, z):
        return npoly.polyval(z, self._c)

    def __add__(self, other):
        return Poly(npoly.polyadd(self._c, _poly(other)._c))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(npoly.polysub(self._c, _poly(other)._c))

    def __rsub__(self, other):
        return _poly(other) - self

    def __neg__(self):
        return Poly(-self._c)

    def __mul__(self, other):
        return Poly(npoly.polymul(self._c, _poly(other)._c))

    __rmul__ = __mul__

    def __pow__(self, k):
        return Poly(npoly.polypow(self._c, int(k)))

    def deriv(self, m=1):
        if self.degree < m:
            return Poly([0])
        return Poly(npoly.polyder(self._c, m))

    def divmod(self, other):
        q, r = npoly.polydiv(self._c, _poly(other)._c)
        return Poly(q), Poly(r)

    def shift(self, z0):
        """Coefficients of ``t -> p(z0 + t)``."""
        out = np.zeros(1, dtype=complex)
        for c in self._c[::-1]:
            out = npoly.polyadd(npoly.polymul(out, [z0, 1]), [c])
        return Poly(out, trim=0.0)

    def conj_reverse(self, d):
        """``z**d * conj(p(1/conj(z)))`` for ``d >= degree``."""
        padded = np.zeros(d + 1, dtype=complex)
        padded[: self._c.size] = self._c
        return Poly(np.conj(padded[::-1]))

    def roots(self):
        return poly_roots(self)

    def norm(self):
        return float(np.max(np.abs(self._c)))

    def __repr__(self):
        return f"Poly({np.round(self._c, 12).tolist()})"


def _poly(x):
    if isinstance(x, Poly):
        return x
    return Poly(np.atleast_1d(np.asarray(x, dtype=complex)))


Z = Poly([0, 1])


# -- roots ---------------------------------------------------------------


def _residual(c, r):
    """Relative residual |p(r)| / sum |c_k| |r|^k."""
    scale = npoly.polyval(abs(r), np.abs(c))
    return abs(npoly.polyval(r, c)) / scale if scale > 0 else 0.0


def poly_roots(p, trim=1e-13):
    """All roots of ``p``: companion eigenvalues plus one Newton step each."""
    p = _poly(p)
    c = _trim(np.asarray(p.coeffs), trim)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    roots = np.asarray(npoly.polyroots(c), dtype=complex)
    dc = npoly.polyder(c)
    tol = tolerances().root_residual
    out = np.empty_like(roots)
    for i, r in enumerate(roots):
        d = npoly.polyval(r, dc)
        if d != 0:
            cand = r - npoly.polyval(r, c) / d
            if np.isfinite(cand) and abs(npoly.polyval(cand, c)) < abs(npoly.polyval(r, c)):
                r = cand
        res = _residual(c, r)
        if not np.isfinite(r) or res > tol:
            raise NumericalFailure(f"root {r} did not converge", residual=res)
        out[i] = r
    return out


def _link(points, radius):
    """Single-linkage groups of ``points`` at relative distance ``radius``."""
    groups = []
    for r in points:
        hits = [g for g in groups if min(abs(r - x) for x in g) <= radius * max(1.0, abs(r))]
        merged = [r]
        for g in hits:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _resolve(c, g, radius, out):
    k = len(g)
    centre = complex(np.mean(g))
    while k >= 1:
        r = _newton(npoly.polyder(c, k - 1) if k > 1 else c, centre)
        if all(_residual(npoly.polyder(c, j) if j else c, r) <= 1e-7 for j in range(k)):
            break
        k -= 1
    if k == 0:
        raise NumericalFailure(f"cluster near {centre} could not be resolved")
    out.append((r, k))
    rest = sorted(g, key=lambda x: abs(x - r))[k:]
    # members the verified root does not explain form clusters of their own
    for h in _link(rest, radius / 2):
        _resolve(c, h, radius / 2, out)


def root_clusters(p, radius=2e-2, trim=1e-13):
    """Roots of ``p`` grouped into (root, multiplicity) pairs.

    Companion eigenvalues of a k-fold root scatter like eps**(1/k), so
    eigenvalues within a degree-dependent radius are merged and the cluster
    centre is refined by Newton's method on the (k-1)-th derivative, where
    the root is simple.  If that refinement does not land on a genuine
    k-fold root the multiplicity is lowered until it does, and the members
    left over are clustered again.
    """
    p = _poly(p)
    c = _trim(np.asarray(p.coeffs), trim)
    if c.size <= 1:
        return []
    raw = np.asarray(npoly.polyroots(c), dtype=complex)
    radius = max(radius, 3 * (64 * np.finfo(float).eps) ** (1.0 / (c.size - 1)))
    out = []
    for g in _link(raw, radius):
        _resolve(c, g, radius, out)
    return out


def _newton(c, z, maxiter=50):
    dc = npoly.polyder(c)
    for _ in range(maxiter):
        f = npoly.polyval(z, c)
        d = npoly.polyval(z, dc)
        if d == 0 or f == 0:
            break
        step = f / d
        z = z - step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


# -- rational maps --------------------------------------------------------


_CHECK_POINTS = np.concatenate(
    [r * np.exp(2j * np.pi * (np.arange(9) + 0.3) / 9) for r in (0.5, 1.0, 2.0)]
)


def _agrees(num, den, n1, d1, rel=1e-8):
    """Pointwise check that cancelling a factor left the function unchanged."""
    z = _CHECK_POINTS
    q0, q1 = den(z), d1(z)
    ok = (np.abs(q0) > 1e-8 * den.norm()) & (np.abs(q1) > 1e-8 * d1.norm())
    if not np.any(ok):
        return True
    f0 = num(z[ok]) / q0[ok]
    f1 = n1(z[ok]) / q1[ok]
    return bool(np.all(np.abs(f0 - f1) <= rel * (1 + np.abs(f0))))


def _reduce(num, den, eps):
    if num.is_zero():
        return Poly([0]), Poly([1])
    if num.degree >= 1 and den.degree >= 1:
        rn = list(np.asarray(npoly.polyroots(num.coeffs), dtype=complex))
        rd = list(np.asarray(npoly.polyroots(den.coeffs), dtype=complex))
        common = []
        for r in rd:
            if not rn:
                break
            j = int(np.argmin([abs(r - s) for s in rn]))
            if abs(r - rn[j]) <= eps * max(1.0, abs(r)):
                common.append(0.5 * (r + rn.pop(j)))
        for r in common:
            n1, _ = num.divmod([-r, 1])
            d1, _ = den.divmod([-r, 1])
            # close roots of an ill-conditioned pair need not be a common factor
            if _agrees(num, den, n1, d1):
                num, den = n1, d1
    return num, den


class RationalMap:
    """Reduced quotient ``num/den`` of complex polynomials.

    Construction reduces and normalizes (denominator monic).  Instances are
    immutable; equality is coefficientwise within the ``map_equal``
    relative tolerance.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,), reduce=True):
        num, den = _poly(num), _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        if reduce:
            num, den = _reduce(num, den, tolerances().gcd)
        lead = den.lead
        with np.errstate(over="ignore", invalid="ignore"):
            nc, dc = num.coeffs / lead, den.coeffs / lead
        if not (np.all(np.isfinite(nc)) and np.all(np.isfinite(dc))):
            raise ValueError("coefficients overflow when the denominator is made monic")
        object.__setattr__(self, "num", Poly(nc))
        object.__setattr__(self, "den", Poly(dc))

    def __setattr__(self, name, value):
        raise AttributeError("RationalMap is immutable")

    @classmethod
    def constant(cls, c):
        return cls([c], [1])

    @classmethod
    def identity(cls):
        return cls([0, 1], [1])

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, RationalMap) else cls.constant(complex(x))

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def is_zero(self):
        return self.num.is_zero()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.num(z) / self.den(z)

    def poles(self):
        return poly_roots(self.den)

    def zeros(self):
        return poly_roots(self.num)

    def deriv(self):
        p, q = self.num, self.den
        return RationalMap(p.deriv() * q - p * q.deriv(), q * q)

    def __add__(self, other):
        o = RationalMap.coerce(other)
        return RationalMap(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalMap(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-RationalMap.coerce(other))

    def __rsub__(self, other):
        return RationalMap.coerce(other) - self

    def __mul__(self, other):
        o = RationalMap.coerce(other)
        return RationalMap(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalMap.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero map")
        return RationalMap(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalMap.coerce(other) / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return RationalMap(self.den**-k, self.num**-k)
        return RationalMap(self.num**k, self.den**k)

    def coeff_vectors(self):
        return np.asarray(self.num.coeffs), np.asarray(self.den.coeffs)

    def isclose(self, other, rtol=None):
        """Coefficientwise comparison of the normalized forms."""
        if not isinstance(other, RationalMap):
            try:
                other = RationalMap.coerce(other)
            except (TypeError, ValueError):
                return False
        rtol = tolerances().map_equal if rtol is None else rtol
        return coeff_error(self, other) <= rtol

    def __eq__(self, other):
        return self.isclose(other)

    __hash__ = None

    def __repr__(self):
        from .expr import format_map

        return f"RationalMap({format_map(self)!r})"

    def to_json(self):
        return {
            "num": [complex_pair(c) for c in self.num.coeffs],
            "den": [complex_pair(c) for c in self.den.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        def conv(v):
            return [complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in v]

        return cls(conv(obj["num"]), conv(obj["den"]))


def complex_pair(z):
    """``[re, im]`` as plain floats (negative zeros cleared)."""
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def coeff_error(a, b):
    """Max coefficient difference of two maps relative to their largest coefficient."""
    an, ad = a.coeff_vectors()
    bn, bd = b.coeff_vectors()

    def pad(x, n):
        out = np.zeros(n, dtype=complex)
        out[: x.size] = x
        return out

    n = max(an.size, bn.size)
    d = max(ad.size, bd.size)
    va = np.concatenate([pad(an, n), pad(ad, d)])
    vb = np.concatenate([pad(bn, n), pad(bd, d)])
    scale = max(np.max(np.abs(va)), np.max(np.abs(vb)))
    return float(np.max(np.abs(va - vb)) / scale)


def compose(outer, inner):
    """``outer ∘ inner`` as a reduced rational map."""
    outer, inner = RationalMap.coerce(outer), RationalMap.coerce(inner)
    if inner.is_constant():
        c = inner.num.coeffs[0] / inner.den.coeffs[0]
        dv = outer.den(c)
        if abs(dv) <= tolerances().pole * max(1.0, outer.den.norm()):
            raise PoleCollision(f"constant inner map {c} is a pole of the outer map")
        return RationalMap.constant(outer.num(c) / dv)
    P, Q = outer.num.coeffs, outer.den.coeffs
    r, s = inner.num, inner.den
    d = max(outer.num.degree, outer.den.degree, 0)
    rp = [Poly([1])]
    sp = [Poly([1])]
    for _ in range(d):
        rp.append(rp[-1] * r)
        sp.append(sp[-1] * s)
    num = Poly([0])
    den = Poly([0])
    for k in range(d + 1):
        basis = rp[k] * sp[d - k]
        if k < P.size:
            num = num + basis * P[k]
        if k < Q.size:
            den = den + basis * Q[k]
    return RationalMap(num, den)


def exterior_map(phi):
    """``rho ∘ phi ∘ rho`` with ``rho(z) = 1/conj(z)``.

    For ``phi = p/q`` and ``d = max(deg p, deg q)`` this is ``q#/p#`` where
    ``p#(z) = z**d conj(p(1/conj(z)))``.
    """
    phi = RationalMap.coerce(phi)
    if phi.is_zero():
        raise DegenerateMap("exterior map of the zero map is the constant infinity")
    d = phi.degree
    return RationalMap(phi.den.conj_reverse(d), phi.num.conj_reverse(d))


def _check_unimodular(alpha):
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > tolerances().unimodular:
        raise InvalidUnimodular(f"|{alpha}| = {abs(alpha)} is not 1")
    return alpha / abs(alpha)


def cayley(alpha):
    """``tau_alpha(z) = i(alpha - z)/(alpha + z)``: disk onto upper half-plane, alpha to 0."""
    a = _check_unimodular(alpha)
    return RationalMap([1j * a, -1j], [a, 1])


def cayley_inverse(alpha):
    """Inverse of :func:`cayley`: ``w -> alpha (i - w)/(i + w)``."""
    a = _check_unimodular(alpha)
    return RationalMap([1j * a, -a], [1j, 1])


def rotation(theta):
    return RationalMap([0, np.exp(1j * theta)], [1])


class PolyMatrix2:
    """2x2 matrix of polynomials acting by linear fractional transformation."""

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        for name, v in zip(self.__slots__, (a11, a12, a21, a22)):
            object.__setattr__(self, name, _poly(v))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix2 is immutable")

    @classmethod
    def identity(cls):
        return cls([1], [0], [0], [1])

    def __matmul__(self, o):
        return PolyMatrix2(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def entries(self):
        return self.a11, self.a12, self.a21, self.a22

    def __call__(self, z):
        return np.array([[e(z) for e in self.entries()[:2]], [e(z) for e in self.entries()[2:]]])


def lft_apply(M, h):
    """``(a11 h + a12)/(a21 h + a22)`` for a polynomial matrix ``M``."""
    h = RationalMap.coerce(h)
    p, q = h.num, h.den
    num = M.a11 * p + M.a12 * q
    den = M.a21 * p + M.a22 * q
    if den.is_zero() or den.norm() <= tolerances().pole * max(1.0, num.norm()):
        raise DegenerateLFT("denominator a21*h + a22 vanishes identically")
    return RationalMap(num, den)


def _critical_at_infinity(phi):
    a, b = phi.num.degree, phi.den.degree
    if a - b >= 2:
        return True, complex(np.inf)
    if b - a >= 2:
        return True, 0j
    if a == b:
        # phi(1/w) = phi(inf) + c1 w + ...; critical iff c1 = 0
        from .jets import jet_of_rational

        flipped = compose(phi, RationalMap([1], [0, 1]))
        j = jet_of_rational(flipped, 0.0, 1)
        scale = max(abs(j.taylor[0]), 1.0)
        if abs(j.taylor[1]) <= 1e-12 * scale:
            return True, complex(j.taylor[0])
    return False, None


def critical_values(phi):
    """Values of ``phi`` at its critical points, including poles of order >= 2
    (value infinity) and the point at infinity when it is critical."""
    phi = RationalMap.coerce(phi)
    if phi.is_constant():
        raise DegenerateMap("constant map has no critical-point structure")
    p, q = phi.num, phi.den
    w = p.deriv() * q - p * q.deriv()
    vals = []
    for c in poly_roots(w, trim=1e-12):
        qc = q(c)
        if abs(qc) <= 1e-9 * max(1.0, q.norm()) * max(1.0, abs(c)) ** q.degree:
            vals.append(complex(np.inf))
        else:
            vals.append(complex(p(c) / qc))
    crit, v = _critical_at_infinity(phi)
    if crit:
        vals.append(v)
    return vals
