"""Boundary contact of rational self-maps of the disk analytic on the closed disk.

The contact set is the set of unimodular zeros of ``phi - phi_e``; with
``phi = p/q`` its numerator is ``N = p p# - q q#``, which on the circle
equals ``z**d (|p|**2 - |q|**2)``.  A contact point of order ``n`` is an
``n``-fold zero of ``N``, so roots are located with multiplicity-aware
clustering.
"""

import dataclasses

import numpy as np

from .config import tolerances
from .errors import (
    BlaschkeLikeContact,
    Indeterminate,
    InvalidUnimodular,
    NoContact,
    NotSelfMapOfDisk,
    NumericalFailure,
    OutOfScopeMap,
)
from .jets import Jet, faa_di_bruno, first_nonreal_index, jet_of_rational
from .ratfun import (
    RationalMap,
    cayley,
    cayley_inverse,
    complex_pair,
    poly_roots,
    root_clusters,
)

GRID_POINTS = 720


@dataclasses.dataclass(frozen=True)
class ContactPoint:
    zeta: complex
    lam: complex
    order: int
    data: Jet
    angular_derivative: complex
    transferred: Jet  # half-plane jet tau_lam ∘ phi ∘ tau_zeta^{-1} at 0

    def to_json(self):
        return {
            "zeta": complex_pair(self.zeta),
            "lambda": complex_pair(self.lam),
            "order": self.order,
            "derivative": complex_pair(self.angular_derivative),
            "data": [complex_pair(c) for c in self.data.taylor],
        }


@dataclasses.dataclass(frozen=True)
class ContactProfile:
    points: tuple
    is_blaschke: bool
    map: RationalMap

    def to_json(self):
        return {"blaschke": self.is_blaschke, "points": [p.to_json() for p in self.points]}


def _unit(z):
    return complex(z) / abs(z)


def validate_self_map(phi):
    """Necessary-and-sufficient check for rational maps analytic on the closed disk:
    no poles in the closed disk and boundary modulus at most one on a grid."""
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    if phi.is_constant():
        c = phi(0.0)
        if abs(c) >= 1:
            raise NotSelfMapOfDisk(f"constant {c} is not in the open disk")
        return phi
    poles = poly_roots(phi.den)
    if poles.size and np.min(np.abs(poles)) <= 1 + tol.selfmap_slack:
        raise NotSelfMapOfDisk(f"pole at {poles[np.argmin(np.abs(poles))]} in the closed disk")
    grid = np.exp(2j * np.pi * np.arange(GRID_POINTS) / GRID_POINTS)
    m = np.max(np.abs(phi(grid)))
    if m > 1 + tol.selfmap_slack:
        raise NotSelfMapOfDisk(f"boundary modulus reaches {m:.6g} > 1")
    return phi


def contact_numerator(phi):
    d = phi.degree
    p, q = phi.num, phi.den
    return p * p.conj_reverse(d) - q * q.conj_reverse(d)


def is_blaschke(phi):
    """True when ``phi - phi_e`` vanishes identically."""
    phi = RationalMap.coerce(phi)
    d = phi.degree
    p, q = phi.num, phi.den
    N = contact_numerator(phi)
    scale = max(p.norm() * p.conj_reverse(d).norm(), q.norm() * q.conj_reverse(d).norm())
    return N.is_zero() or N.norm() <= tolerances().blaschke * scale


def transferred_jet(phi, zeta, order):
    """Jet at 0 of ``tau_lam ∘ phi ∘ tau_zeta^{-1}`` with ``lam = phi(zeta)`` projected to the circle."""
    zeta = _unit(zeta)
    jp = jet_of_rational(phi, zeta, order)
    lam = _unit(jp.taylor[0])
    jin = jet_of_rational(cayley_inverse(zeta), 0.0, order)
    jout = jet_of_rational(cayley(lam), jp.taylor[0], order)
    return faa_di_bruno(jout, faa_di_bruno(jp, jin))


def order_of_contact_at(phi, zeta):
    """Order of contact ``n`` at ``zeta`` and the jet ``D_n(phi, zeta)``."""
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    zeta = complex(zeta)
    if abs(abs(zeta) - 1) > tol.unimodular * 100:
        raise InvalidUnimodular(f"{zeta} is not on the unit circle")
    zeta = _unit(zeta)
    lam = phi(zeta)
    if abs(abs(lam) - 1) > tol.circle:
        raise NoContact(f"|phi(zeta)| = {abs(lam):.12g} is not 1")
    f = transferred_jet(phi, zeta, tol.max_jet_order)
    n = first_nonreal_index(f.taylor)
    if n is None:
        raise BlaschkeLikeContact(f"all transferred coefficients real to order {tol.max_jet_order}")
    if n % 2 or f.taylor[n].imag <= 0:
        raise NotSelfMapOfDisk(
            f"first non-real transferred coefficient a_{n} = {f.taylor[n]} violates the Pick condition"
        )
    return n, jet_of_rational(phi, zeta, n)


def _contact_point(phi, zeta):
    n, data = order_of_contact_at(phi, zeta)
    t = transferred_jet(phi, zeta, n)
    return ContactPoint(
        zeta=_unit(zeta),
        lam=_unit(data.taylor[0]),
        order=n,
        data=data,
        angular_derivative=complex(data.taylor[1]),
        transferred=t,
    )


def contact_points_raw(phi):
    """Unimodular zeros of ``phi - phi_e`` with their root multiplicities."""
    tol = tolerances()
    out = []
    for r, mult in root_clusters(contact_numerator(phi)):
        if abs(abs(r) - 1) <= tol.circle:
            out.append((_unit(r), mult))
    return out


def contact_profile(phi):
    phi = validate_self_map(phi)
    if phi.is_constant():
        return ContactProfile((), False, phi)
    if is_blaschke(phi):
        return ContactProfile((), True, phi)
    pts = []
    for zeta, _ in contact_points_raw(phi):
        if any(abs(zeta - p.zeta) <= tolerances().circle for p in pts):
            continue
        pts.append(_contact_point(phi, zeta))
    pts.sort(key=lambda p: np.angle(p.zeta))
    return ContactProfile(tuple(pts), False, phi)


def composite_contact_order(f1_jet, f2_jet):
    """Order of contact of ``f2 ∘ f1`` predicted as ``min(N1, N2)``."""
    n1 = first_nonreal_index(f1_jet.taylor)
    n2 = first_nonreal_index(f2_jet.taylor)
    if n1 is None and n2 is None:
        raise Indeterminate("both jets are real to the available order")
    return min(n for n in (n1, n2) if n is not None)


def _derivative_at(phi, z):
    return complex(jet_of_rational(phi, z, 1).taylor[1])


def denjoy_wolff(phi):
    """Attractive fixed point ``omega`` and ``phi'(omega)``."""
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    if phi.isclose(RationalMap.identity()):
        raise OutOfScopeMap("identity map")
    P = phi.num - phi.den * RationalMap.identity().num
    if P.norm() <= 1e-14 * max(phi.num.norm(), phi.den.norm()):
        raise OutOfScopeMap("identity map")
    fixed = [r for r, _ in root_clusters(P)]
    inside = [r for r in fixed if abs(r) < 1 - tol.circle]
    if inside:
        w = inside[0]
        d = _derivative_at(phi, w)
        if phi.degree == 1 and abs(d) >= 1 - tol.circle:
            raise OutOfScopeMap("elliptic automorphism")
        return complex(w), d
    best = None
    for r in fixed:
        if abs(abs(r) - 1) <= tol.circle:
            w = _unit(r)
            d = _derivative_at(phi, w)
            if abs(d.imag) <= 1e-7 * max(1.0, abs(d)) and 0 < d.real <= 1 + tol.derivative_one:
                if best is None or d.real < best[1].real:
                    best = (w, d)
    if best is None:
        raise NumericalFailure("no attractive fixed point located")
    return best


def clark_atoms(phi, alpha):
    """Point masses ``1/|phi'(zeta)|`` at contact points mapped to ``alpha``."""
    alpha = complex(alpha)
    if abs(abs(alpha) - 1) > tolerances().unimodular:
        raise InvalidUnimodular(f"{alpha} is not unimodular")
    prof = contact_profile(phi)
    return [
        (p.zeta, 1.0 / abs(p.angular_derivative))
        for p in prof.points
        if abs(p.lam - alpha) <= 1e2 * tolerances().unimodular
    ]


def is_compact_symbol(phi):
    prof = contact_profile(phi)
    return not prof.points and not prof.is_blaschke
