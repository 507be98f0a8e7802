"""Essential normality of composition operators with rational symbols.

For a rational self-map analytic on the closed disk the criterion is finite:
``C_phi`` is non-trivially essentially normal exactly when ``phi`` has a
single boundary contact point ``zeta``, fixes it, and ``phi'(zeta) = 1``.
Finite Blaschke products of degree at least two are never essentially
normal and symbols without boundary contact induce compact operators.
"""

import dataclasses
import logging
import math

import numpy as np

from .cf_interp import (
    CFData,
    a_matrix,
    check_pick,
    construct_basic_interpolant,
    real_line_grid,
    value_at_infinity,
)
from .config import tolerances
from .contact import contact_profile, is_blaschke, order_of_contact_at, validate_self_map
from .errors import (
    AmbiguousGrouping,
    CriticalContactPoint,
    InternalInvariantViolation,
    NotLocallyInvertible,
    NumericalFailure,
    OutOfScopeMap,
    TailNotStrictlyUpper,
)
from .jets import faa_di_bruno, first_nonreal_index, jet_invert, jet_of_rational
from .ratfun import (
    RationalMap,
    cayley,
    cayley_inverse,
    complex_pair,
    compose,
    critical_values,
    exterior_map,
    lft_apply,
)

log = logging.getLogger(__name__)

COMPACT = "Compact"
NONTRIVIAL = "NonTriviallyEssentiallyNormal"
NOT_EN = "NotEssentiallyNormal"
OUT_OF_SCOPE = "OutOfScope"


@dataclasses.dataclass(frozen=True)
class Classification:
    verdict: str
    zeta: complex = None
    order: int = None
    derivative: complex = None
    reason: str = None

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.zeta is not None:
            out["zeta"] = complex_pair(self.zeta)
        if self.order is not None:
            out["order"] = int(self.order)
        if self.derivative is not None:
            out["derivative"] = complex_pair(self.derivative)
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclasses.dataclass(frozen=True)
class CombinationTerm:
    coeff: complex
    map: RationalMap


def _is_automorphism(phi):
    return phi.degree == 1 and is_blaschke(phi)


def classify(phi):
    tol = tolerances()
    phi = validate_self_map(phi)
    if phi.is_constant():
        return Classification(COMPACT, reason="NoContactPoints")
    if phi.isclose(RationalMap.identity()):
        return Classification(OUT_OF_SCOPE, reason="Identity")
    if _is_automorphism(phi):
        return Classification(OUT_OF_SCOPE, reason="Automorphism")
    prof = contact_profile(phi)
    if prof.is_blaschke:
        return Classification(NOT_EN, reason="BlaschkeDegreeAtLeast2")
    if not prof.points:
        return Classification(COMPACT, reason="NoContactPoints")
    p = prof.points[0]
    if len(prof.points) > 1:
        return Classification(NOT_EN, zeta=p.zeta, order=p.order, reason="MultipleContactPoints")
    if abs(p.lam - p.zeta) > tol.circle:
        return Classification(
            NOT_EN, zeta=p.zeta, order=p.order, derivative=p.angular_derivative, reason="ContactPointNotFixed"
        )
    if abs(p.angular_derivative - 1) > tol.derivative_one:
        return Classification(
            NOT_EN, zeta=p.zeta, order=p.order, derivative=p.angular_derivative, reason="DerivativeNotOne"
        )
    return Classification(NONTRIVIAL, zeta=p.zeta, order=p.order, derivative=p.angular_derivative)


# -- generator ---------------------------------------------------------------


def _check_tail(w):
    w = RationalMap.coerce(w)
    x = np.concatenate([real_line_grid(), 10.0 ** np.linspace(-4, 4, 401), -(10.0 ** np.linspace(-4, 4, 401)), [0.0]])
    vals = w(x)
    inf = value_at_infinity(w)
    if not np.all(np.isfinite(vals)) or np.min(vals.imag) <= 0:
        raise TailNotStrictlyUpper("w touches the real axis on the validation grid")
    if not np.isfinite(inf) or inf.imag <= 0:
        raise TailNotStrictlyUpper(f"w(inf) = {inf} is not in the upper half-plane")
    if not w.is_constant():
        check_pick(w)
    return w


def generator_matrix(steps):
    M = a_matrix(0.0, 1.0)
    for s, t in steps:
        M = M @ a_matrix(s, t)
    return M


def half_plane_map(steps, w):
    """``L[A(0,1) A(s_1,t_1) ... ] w`` before Cayley conjugation."""
    return lft_apply(generator_matrix(steps), _check_tail(w))


def generate_ess_normal(zeta, steps, w):
    """``tau_zeta^{-1} ∘ f ∘ tau_zeta`` with ``f = L[A(0,1) A(s_1,t_1) ...] w``."""
    for s, t in steps:
        a_matrix(s, t)  # validates t > 0
        if abs(complex(s).imag) > 0:
            raise OutOfScopeMap(f"s = {s} must be real")
    f = half_plane_map(steps, w)
    return compose(compose(cayley_inverse(zeta), f), cayley(zeta))


def pole_superposition_map(xs, ps, c=1.0, theta=0.0):
    """Self-map with contact at ``tau_1^{-1}(x_j)`` built from ``F(w) = c i - sum p_j/(w - x_j)``.

    Each pole of ``F`` on the real line becomes a boundary contact point
    mapped to ``-1``; ``theta`` pre-rotates the disk.
    """
    F = RationalMap.constant(1j * c)
    for x, p in zip(xs, ps):
        F = F - RationalMap([p], [-x, 1])
    phi = compose(compose(cayley_inverse(1.0), F), cayley(1.0))
    if theta:
        phi = compose(phi, RationalMap([0, np.exp(-1j * theta)], [1]))
    return phi


# -- compact combinations -------------------------------------------------------


def _data_distance(d1, d2):
    d1, d2 = np.asarray(d1), np.asarray(d2)
    scale = np.maximum(1.0, np.maximum(np.abs(d1), np.abs(d2)))
    return float(np.max(np.abs(d1 - d2) / scale))


@dataclasses.dataclass(frozen=True)
class CombinationReport:
    compact: bool
    groups: tuple  # rows: dict(zeta, order, members, sum)

    def to_json(self):
        rows = []
        for g in self.groups:
            rows.append(
                {
                    "zeta": complex_pair(g["zeta"]),
                    "order": g["order"],
                    "members": list(g["members"]),
                    "sum": complex_pair(g["sum"]),
                    "vanishes": bool(g["vanishes"]),
                }
            )
        return {"compact": self.compact, "groups": rows}


def _as_term(t):
    if isinstance(t, CombinationTerm):
        return t
    c, m = t
    return CombinationTerm(complex(c), RationalMap.coerce(m))


def combination_report(terms):
    tol = tolerances()
    terms = [_as_term(t) for t in terms]
    # (zeta, order, data, index, coeff) for every contact point of every term
    entries = []
    for j, t in enumerate(terms):
        prof = contact_profile(t.map)
        if prof.is_blaschke:
            raise OutOfScopeMap(f"term {j} is a finite Blaschke product")
        for p in prof.points:
            entries.append((p.zeta, p.order, p.data.derivatives(), j, t.coeff))
    zetas = []
    for z, *_ in entries:
        if not any(abs(z - y) <= 10 * tol.circle for y in zetas):
            zetas.append(z)
    rows = []
    for zeta in sorted(zetas, key=np.angle):
        here = [e for e in entries if abs(e[0] - zeta) <= 10 * tol.circle]
        for k in sorted({e[1] for e in here}):
            groups = []
            for e in (e for e in here if e[1] == k):
                placed = None
                for g in groups:
                    dist = min(_data_distance(e[2], o[2]) for o in g)
                    if dist <= tol.data:
                        placed = g
                    elif dist <= 10 * tol.data:
                        log.warning("ambiguous data grouping at zeta=%s order=%d (distance %.3g)", zeta, k, dist)
                        raise AmbiguousGrouping(
                            f"data vectors at distance {dist:.3g} fall inside the guard band at zeta={zeta}"
                        )
                if placed is None:
                    groups.append([e])
                else:
                    placed.append(e)
            for g in groups:
                s = complex(sum(e[4] for e in g))
                scale = max(1.0, max(abs(e[4]) for e in g))
                rows.append(
                    {
                        "zeta": zeta,
                        "order": k,
                        "members": tuple(e[3] for e in g),
                        "sum": s,
                        "vanishes": abs(s) <= tol.sum * scale,
                    }
                )
    return CombinationReport(all(r["vanishes"] for r in rows), tuple(rows))


def is_compact_combination(terms):
    return combination_report(terms).compact


# -- basic functions and decomposition ---------------------------------------


def _transfer(zeta, lam, jet, n):
    jin = jet_of_rational(cayley_inverse(zeta), 0.0, n)
    jout = jet_of_rational(cayley(lam), jet.taylor[0], n)
    return faa_di_bruno(jout, faa_di_bruno(jet, jin))


def basic_from_data(zeta, data, seed=0):
    """Degree ``m+1`` basic function with contact at ``zeta`` and ``D_n`` equal to ``data``."""
    zeta = complex(zeta) / abs(zeta)
    n = data.order
    lam = complex(data.taylor[0])
    lam /= abs(lam)
    f = _transfer(zeta, lam, data, n)
    cf = CFData.from_jet(f, n)
    F = construct_basic_interpolant(cf, seed)
    phi0 = compose(compose(cayley_inverse(lam), F), cayley(zeta))
    got = jet_of_rational(phi0, zeta, n).derivatives()
    want = data.derivatives()
    err = float(np.max(np.abs(got - want)) / max(1.0, np.max(np.abs(want))))
    if err > tolerances().jet_match:
        raise NumericalFailure(f"basic function misses the data by {err:.3g}", residual=err)
    return phi0


def decompose_into_basics(phi, seed=0):
    prof = contact_profile(phi)
    if prof.is_blaschke:
        raise OutOfScopeMap("finite Blaschke products are not decomposed")
    return [basic_from_data(p.zeta, p.data, seed) for p in prof.points]


def decomposition_certificate(phi, basics):
    terms = [CombinationTerm(1.0, RationalMap.coerce(phi))]
    terms += [CombinationTerm(-1.0, b) for b in basics]
    return is_compact_combination(terms)


# -- the branch sigma and almost-inverse data ----------------------------------


def sigma_branch_jet(phi, zeta, n):
    """Jet at ``phi(zeta)`` of the branch of ``phi_e^{-1}`` sending ``phi(zeta)`` to ``zeta``."""
    phi = RationalMap.coerce(phi)
    je = jet_of_rational(exterior_map(phi), zeta, n)
    try:
        return jet_invert(je)
    except NotLocallyInvertible as exc:
        raise CriticalContactPoint(f"phi_e'({zeta}) vanishes") from exc


def sigma_transferred_jet(phi, zeta, n):
    """Half-plane jet ``tau_zeta ∘ sigma ∘ tau_lam^{-1}`` at 0."""
    s = sigma_branch_jet(phi, zeta, n)
    lam = s.base / abs(s.base)
    return _transfer(lam, complex(zeta) / abs(zeta), s, n)


def sigma_contact_order(phi, zeta, n):
    return first_nonreal_index(sigma_transferred_jet(phi, zeta, n).taylor)


def almost_inverse_data(phi, zeta):
    """``(c, D_n(sigma∘phi, zeta), D_n(phi∘sigma, lam))`` in derivative convention."""
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    n, jp = order_of_contact_at(phi, zeta)
    zeta = jp.base
    je = jet_of_rational(exterior_map(phi), zeta, n)
    c = math.factorial(n) * complex(jp.taylor[n] - je.taylor[n])
    scale = max(1.0, float(np.max(np.abs(jp.derivatives()))))
    if abs(c) <= tol.zero * scale:
        raise InternalInvariantViolation("phi and phi_e share n-th order data")
    sigma = sigma_branch_jet(phi, zeta, n)
    sp = faa_di_bruno(sigma, jp)
    ps = faa_di_bruno(jp, sigma)
    d1 = complex(jp.taylor[1])
    lam = complex(jp.taylor[0])
    want_sp = np.zeros(n + 1, dtype=complex)
    want_sp[:2] = zeta, 1
    want_sp[n] += c / d1
    want_ps = np.zeros(n + 1, dtype=complex)
    want_ps[:2] = lam, 1
    want_ps[n] += c / d1**n
    for got, want, name in ((sp, want_sp, "sigma∘phi"), (ps, want_ps, "phi∘sigma")):
        err = float(np.max(np.abs(got.derivatives() - want)) / max(1.0, np.max(np.abs(want))))
        if err > tol.almost_inverse:
            raise InternalInvariantViolation(f"{name} data deviates by {err:.3g}")
    return c, sp, ps


def is_outer_regular(phi):
    """True when every critical value of ``phi`` lies in the open disk.

    Equivalently the critical values of ``phi_e`` lie outside the closed
    disk, so the branches of ``phi_e^{-1}`` are defined on some ``rD``,
    ``r > 1``.  Maps without contact points are regular by convention.
    """
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    prof = contact_profile(phi)
    if not prof.points:
        return True
    vals = critical_values(exterior_map(phi))
    regular = all(not np.isfinite(v) or abs(v) > 1 + tol.outer for v in vals)
    if regular and max(p.order for p in prof.points) > 2:
        raise InternalInvariantViolation("outer regular map with contact order above 2")
    return regular
