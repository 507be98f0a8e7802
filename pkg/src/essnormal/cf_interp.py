"""Boundary Carathéodory-Fejér interpolation at 0 in the Pick class.

Data ``a_0, ..., a_n`` (``n = 2m``, ``a_0..a_{n-1}`` real, ``Im a_n > 0``)
is the jet at 0 of a Pick function analytic across 0 exactly when the
Hankel matrix of ``a_1..a_{n-1}`` is positive definite.  Solutions are
built from Julia's reduction/augmentation pair; at the level of maps an
augmentation is the linear fractional action of

    A(a0, a1)(z) = [[a0 a1 z, -a0 - a1 z],
                    [a1 z,     -1       ]].
"""

import dataclasses

import numpy as np

from .config import tolerances
from .errors import (
    DimensionMismatch,
    InternalHankelViolation,
    InvalidAugmentationParameter,
    InvalidCFData,
    NoSolution,
    NotPickFunction,
    NotReducible,
    NotSymmetric,
    NumericalFailure,
    RegularValueSearchFailed,
)
from .jets import Jet, jet_of_rational, series_div
from .ratfun import PolyMatrix2, RationalMap, complex_pair, lft_apply, poly_roots

MAX_TRIES = 64


def _is_real(c):
    tol = tolerances()
    return abs(c.imag) <= max(tol.real * abs(c), tol.real_abs)


_pair = complex_pair


@dataclasses.dataclass(frozen=True)
class CFData:
    n: int
    a: tuple

    def __post_init__(self):
        n = int(self.n)
        a = tuple(complex(x) for x in self.a)
        if n < 2 or n % 2:
            raise InvalidCFData(f"order must be an even positive integer, got {self.n}")
        if len(a) != n + 1:
            raise InvalidCFData(f"need {n + 1} coefficients, got {len(a)}")
        for k, c in enumerate(a[:-1]):
            if not _is_real(c):
                raise InvalidCFData(f"a_{k} = {c} is not real")
        if a[-1].imag <= tolerances().real_abs:
            raise InvalidCFData(f"a_{n} = {a[-1]} is not in the upper half-plane")
        a = tuple(complex(c.real, 0.0) for c in a[:-1]) + (a[-1],)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "a", a)

    @property
    def m(self):
        return self.n // 2

    def jet(self):
        return Jet(0.0, self.a)

    def to_json(self):
        return {"n": self.n, "a": [_pair(c) for c in self.a]}

    @classmethod
    def from_json(cls, obj):
        a = [complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in obj["a"]]
        return cls(int(obj["n"]), tuple(a))

    @classmethod
    def from_jet(cls, jet, n=None):
        n = jet.order if n is None else n
        return cls(n, tuple(jet.taylor[: n + 1]))


@dataclasses.dataclass(frozen=True)
class AugmentationChain:
    steps: tuple
    tail: complex

    def __post_init__(self):
        steps = []
        for s, t in self.steps:
            s, t = complex(s), complex(t)
            if not (_is_real(s) and _is_real(t)):
                raise InvalidAugmentationParameter(f"step ({s}, {t}) is not real")
            if t.real <= 0:
                raise InvalidAugmentationParameter(f"t = {t.real} must be positive")
            steps.append((s.real, t.real))
        tail = complex(self.tail)
        if tail.imag <= 0:
            raise InvalidAugmentationParameter(f"tail {tail} is not in the upper half-plane")
        object.__setattr__(self, "steps", tuple(steps))
        object.__setattr__(self, "tail", tail)

    @property
    def m(self):
        return len(self.steps)

    def to_json(self):
        return {"steps": [[s, t] for s, t in self.steps], "tail": _pair(self.tail)}

    @classmethod
    def from_json(cls, obj):
        tl = obj["tail"]
        tail = complex(tl[0], tl[1]) if isinstance(tl, (list, tuple)) else complex(tl)
        return cls(tuple((float(s), float(t)) for s, t in obj["steps"]), tail)


# -- Hankel positivity -----------------------------------------------------


def hankel_matrix(a):
    """``H[i, j] = a_{i+j+1}`` from the values ``a_1..a_{2m-1}``."""
    a = np.asarray(a)
    if a.ndim != 1 or a.size % 2 == 0:
        raise DimensionMismatch(f"need an odd number 2m-1 of values, got {a.size}")
    if np.iscomplexobj(a):
        if np.any(np.abs(a.imag) > tolerances().real * np.maximum(np.abs(a), 1.0)):
            raise DimensionMismatch("Hankel entries must be real")
        a = a.real
    m = (a.size + 1) // 2
    i, j = np.indices((m, m))
    return a[i + j].astype(float)


def is_positive_definite(H):
    """Cholesky test with pivots squared above ``pd * max diagonal``."""
    H = np.atleast_2d(np.asarray(H))
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotSymmetric(f"matrix of shape {H.shape} is not square")
    scale = max(float(np.max(np.abs(H))), 1e-300)
    if np.iscomplexobj(H):
        if np.max(np.abs(H.imag)) > 1e-12 * scale:
            raise NotSymmetric("matrix is not real")
        H = H.real
    if np.max(np.abs(H - H.T)) > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric")
    d = np.diag(H)
    dmax = float(np.max(d))
    if dmax <= 0:
        return False
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        return False
    return bool(np.all(np.diag(L) ** 2 > tolerances().pd * dmax))


# -- Julia reduction and augmentation --------------------------------------


def reduce_jet(f_jet, out_order=None):
    """Jet of ``g = 1/(f'(0) z) - 1/(f - f(0))`` at 0."""
    a = np.asarray(f_jet.taylor)
    n = f_jet.order
    if out_order is None:
        out_order = n - 2
    if out_order < 0 or out_order > n - 2:
        raise DimensionMismatch(f"order {out_order} unavailable from a jet of order {n}")
    a1 = a[1] if n >= 1 else 0
    if abs(a1) <= tolerances().zero:
        raise NotReducible("f'(0) vanishes")
    # f - f(0) = z u(z); g = (1/a1 - 1/u)/z
    u = a[1:]
    one = np.zeros(u.size, dtype=complex)
    one[0] = 1
    v = series_div(one, u, u.size - 1)
    w = -v
    w[0] += 1 / a1
    return Jet(0.0, w[1 : out_order + 2])


def augment_jet(g_jet, a0, a1, out_order=None):
    """Jet of ``f = a0 + a1 z / (1 - a1 z g)`` at 0."""
    a1 = complex(a1)
    if abs(a1.imag) > tolerances().real_abs or a1.real <= 0:
        raise InvalidAugmentationParameter(f"a1 = {a1} must be real positive")
    a1 = a1.real
    k = g_jet.order
    if out_order is None:
        out_order = k + 2
    if out_order < 0 or out_order > k + 2:
        raise DimensionMismatch(f"order {out_order} unavailable from a jet of order {k}")
    den = np.zeros(k + 2, dtype=complex)
    den[0] = 1
    den[1:] = -a1 * np.asarray(g_jet.taylor)
    num = np.zeros(k + 2, dtype=complex)
    num[0] = a1
    q = series_div(num, den, k + 1)
    f = np.concatenate([[complex(a0)], q])
    return Jet(0.0, f[: out_order + 1])


def a_matrix(a0, a1):
    """Polynomial matrix ``A(a0, a1)``; ``a0`` may be complex for tail factors."""
    a1 = complex(a1)
    if abs(a1.imag) > tolerances().real_abs or a1.real <= 0:
        raise InvalidAugmentationParameter(f"a1 = {a1} must be real positive")
    a0, a1 = complex(a0), a1.real
    return PolyMatrix2([0, a0 * a1], [-a0, -a1], [0, a1], [-1])


def chain_matrix(chain, extended=False):
    """Ordered product of the chain's A-matrices, optionally closed by ``A(tail, 1)``."""
    M = PolyMatrix2.identity()
    for s, t in chain.steps:
        M = M @ a_matrix(s, t)
    if extended:
        M = M @ a_matrix(chain.tail, 1.0)
    return M


def parametrization_chain(data):
    """Chain parameters ``(a0^(k), a1^(k))`` and tail ``a0^(m)`` of CF data."""
    data = data if isinstance(data, CFData) else CFData.from_json(data)
    a = np.asarray(data.a)
    H = hankel_matrix(a[1 : data.n].real)
    if not is_positive_definite(H):
        raise NoSolution("Hankel matrix is not positive definite")
    jet = data.jet()
    steps = []
    for _ in range(data.m):
        s, t = jet.taylor[0].real, jet.taylor[1].real
        if t <= 0:
            raise InternalHankelViolation(f"intermediate a1 = {t} is not positive")
        steps.append((s, t))
        g = np.array(reduce_jet(jet).taylor)
        g[:-1] = g[:-1].real
        jet = Jet(0.0, g)
    tail = complex(jet.taylor[0])
    if tail.imag <= 0:
        raise InternalHankelViolation(f"tail {tail} is not in the upper half-plane")
    return AugmentationChain(tuple(steps), tail)


# -- rational solutions ------------------------------------------------------


def _upper_grid(npts=1000):
    rng = np.random.default_rng(12345)
    x = np.sinh(rng.uniform(-6, 6, npts))
    y = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), npts))
    return x + 1j * y


def check_pick(g):
    """Necessary check that ``g`` maps the upper half-plane into its closure."""
    g = RationalMap.coerce(g)
    vals = g(_upper_grid())
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.min(vals.imag) < -tolerances().pick_slack * scale:
        raise NotPickFunction("g leaves the closed upper half-plane on the sampling grid")
    return g


def solution_from_chain(chain, g, require_tail=False):
    """``L[A(s_0,t_0) ... A(s_{m-1},t_{m-1})] g`` as a reduced rational map."""
    g = check_pick(g)
    g0 = g(0.0)
    if require_tail:
        if abs(g0 - chain.tail) > 1e-9 * max(1.0, abs(chain.tail)):
            raise InvalidCFData(f"g(0) = {g0} differs from the chain tail {chain.tail}")
    elif g0.imag <= 0:
        raise NotPickFunction(f"g(0) = {g0} is not in the upper half-plane")
    return lft_apply(chain_matrix(chain), g)


def real_line_grid():
    x = 10.0 ** np.linspace(-1, 2, 100)
    return np.concatenate([-x[::-1], x])


def value_at_infinity(F):
    a, b = F.num.degree, F.den.degree
    if a > b:
        return complex(np.inf)
    if a < b:
        return 0j
    return complex(F.num.lead / F.den.lead)


def maps_real_line_into_upper(F):
    v = F(real_line_grid())
    inf = value_at_infinity(F)
    return bool(np.all(v.imag > 0) and np.isfinite(inf) and inf.imag > 0)


def _min_separation(r):
    if r.size < 2:
        return np.inf
    d = np.abs(r[:, None] - r[None, :])
    d[np.diag_indices(r.size)] = np.inf
    return float(np.min(d))


def jet_mismatch(F, data):
    j = jet_of_rational(F, 0.0, data.n)
    a = np.asarray(data.a)
    return float(np.max(np.abs(j.taylor - a)) / max(1.0, np.max(np.abs(a))))


def construct_basic_interpolant(data, seed=0):
    """Degree ``m+1`` solution for which ``a_0`` is a regular value."""
    data = data if isinstance(data, CFData) else CFData.from_json(data)
    tol = tolerances()
    chain = parametrization_chain(data)
    M = chain_matrix(chain, extended=True)
    m = data.m
    a0 = data.a[0]
    rng = np.random.default_rng(seed)
    w = None
    for _ in range(MAX_TRIES):
        r = rng.uniform(0.1, 2.0)
        theta = rng.uniform(0.0, np.pi)
        if not 0 < theta < np.pi:
            continue
        w = chain.tail + r * np.exp(1j * theta)
        F = lft_apply(M, w)
        if F.degree != m + 1:
            continue
        level = F.num - F.den * a0
        if level.degree != m + 1:
            continue
        if _min_separation(poly_roots(level)) < tol.sep:
            continue
        if not maps_real_line_into_upper(F):
            continue
        err = jet_mismatch(F, data)
        if err > tol.jet_match:
            raise NumericalFailure(f"interpolant jet misses the data by {err:.3g}", residual=err)
        return F
    raise RegularValueSearchFailed(f"no regular tail found in {MAX_TRIES} tries", last_w=w)


def minimal_interpolant(data):
    """Degree ``m`` solution with constant tail; ``a_0`` need not be a regular value."""
    data = data if isinstance(data, CFData) else CFData.from_json(data)
    chain = parametrization_chain(data)
    return lft_apply(chain_matrix(chain), chain.tail)
