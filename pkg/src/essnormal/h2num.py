"""Finite-section numerics for composition operators on H^2.

The N x N section of ``C_phi`` in the monomial basis has columns
``[z^j] phi^k``.  Its self-commutator ``A*A - AA*`` is only a diagnostic:
sections of products and products of sections differ by an amount that is
not controlled near the boundary spectrum, so the verdict hints here never
override :func:`essnormal.essnorm.classify`.
"""

import csv
import dataclasses
import io

import numpy as np

from .config import tolerances
from .errors import (
    BranchCollision,
    InternalInvariantViolation,
    NumericalFailure,
    SeriesDivergenceRisk,
)
from .jets import jet_of_rational
from .ratfun import RationalMap, exterior_map, poly_roots

PROBES = (4, 16, 64)
DECAY_RATIO = 0.1
NON_DECAY_RATIO = 0.5


@dataclasses.dataclass(frozen=True)
class FiniteSection:
    N: int
    A: np.ndarray


def _kahan_truncated_product(a, b, N):
    """Truncated product of two series with compensated accumulation."""
    s = np.zeros(N, dtype=complex)
    comp = np.zeros(N, dtype=complex)
    for i in np.nonzero(a[:N])[0]:
        y = a[i] * b[: N - i] - comp[i:]
        t = s[i:] + y
        comp[i:] = (t - s[i:]) - y
        s[i:] = t
    return s


def cphi_matrix(phi, N):
    phi = RationalMap.coerce(phi)
    N = int(N)
    if N < 1:
        raise ValueError("section size must be positive")
    if abs(phi(0.0)) >= 1:
        raise SeriesDivergenceRisk(f"|phi(0)| = {abs(phi(0.0)):.6g} is not below 1")
    s = np.asarray(jet_of_rational(phi, 0.0, N - 1).taylor)
    kahan = N >= tolerances().kahan_min_size
    A = np.zeros((N, N), dtype=complex)
    col = np.zeros(N, dtype=complex)
    col[0] = 1
    A[:, 0] = col
    for k in range(1, N):
        col = _kahan_truncated_product(col, s, N) if kahan else np.convolve(col, s)[:N]
        A[:, k] = col
    A.setflags(write=False)
    return FiniteSection(N, A)


def self_commutator(F):
    A = F.A
    AH = A.conj().T
    C = AH @ A - A @ AH
    err = float(np.max(np.abs(C - C.conj().T))) if C.size else 0.0
    if err > tolerances().hermitian * max(1.0, float(np.max(np.abs(C)))):
        raise InternalInvariantViolation(f"commutator fails to be Hermitian by {err:.3g}")
    return C


@dataclasses.dataclass(frozen=True)
class DiagnosticReport:
    sizes: tuple
    probes: dict  # probe index (1-based) -> list of sigma_k per size, None when k > N
    sigma_1: tuple
    sigma_quarter: tuple
    singular_values: dict  # N -> array
    verdict_hint: str

    def to_json(self):
        return {
            "sizes": list(self.sizes),
            "probes": {str(k): list(v) for k, v in self.probes.items()},
            "sigma_1": list(self.sigma_1),
            "sigma_quarter": list(self.sigma_quarter),
            "verdict_hint": self.verdict_hint,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["N", "k", "sigma"])
        for N in self.sizes:
            for k, v in enumerate(self.singular_values[N], start=1):
                w.writerow([N, k, repr(float(v))])
        return buf.getvalue()


def commutator_singular_values(phi, N):
    C = self_commutator(cphi_matrix(phi, N))
    try:
        return np.linalg.svd(C, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed at N={N}") from exc


def _non_increasing(seq, slack=1e-12):
    return all(b <= a + slack * max(1.0, abs(a)) for a, b in zip(seq, seq[1:]))


def compactness_diagnostic(phi, sizes=(64, 128, 256), probes=PROBES):
    sizes = tuple(int(n) for n in sizes)
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    svs = {N: commutator_singular_values(phi, N) for N in sizes}
    table = {k: [float(svs[N][k - 1]) if k <= N else None for N in sizes] for k in probes}
    s1 = tuple(float(svs[N][0]) for N in sizes)
    quarter = tuple(float(svs[N][max(N // 4, 1) - 1]) for N in sizes)
    vanishing = s1[-1] <= tolerances().hermitian
    trends = [_non_increasing([v for v in vals if v is not None]) for vals in table.values()]
    top = svs[sizes[-1]]
    s16 = top[15] if top.size >= 16 else 0.0
    if all(trends) and (vanishing or s16 < DECAY_RATIO * s1[-1]):
        hint = "decay-consistent"
    elif all(q >= NON_DECAY_RATIO * s and s > 0 for q, s in zip(quarter, s1)):
        hint = "non-decay"
    else:
        hint = "inconclusive"
    return DiagnosticReport(sizes, table, s1, quarter, svs, hint)


def adjoint_pointwise(phi, f_coeffs, z):
    """``C_phi^* f (z)`` from the branches ``sigma_j`` of ``phi_e^{-1}``."""
    tol = tolerances()
    phi = RationalMap.coerce(phi)
    z = complex(z)
    f = np.asarray(f_coeffs, dtype=complex)
    d = phi.degree
    lam0 = phi(0.0)
    base = f[0] / (1 - np.conj(lam0) * z)
    if d == 0:
        return complex(base)
    pe = exterior_map(phi)
    level = pe.num - pe.den * z
    roots = poly_roots(level, trim=1e-13)
    if roots.size != d:
        raise NumericalFailure(f"found {roots.size} branch values, expected {d}")
    if d > 1:
        gaps = np.abs(roots[:, None] - roots[None, :])
        gaps[np.diag_indices(d)] = np.inf
        if np.min(gaps) <= tol.branch * max(1.0, float(np.max(np.abs(roots)))):
            raise BranchCollision(f"{z} is a critical value of phi_e")
    dpe = pe.deriv()
    total = base
    # S*f(w) = (f(w) - f(0))/w as a polynomial
    sf = f[1:][::-1]
    for w in roots:
        dv = dpe(w)
        if abs(dv) <= tol.branch:
            raise BranchCollision(f"phi_e' vanishes at the branch value {w}")
        total += z / dv * (np.polyval(sf, w) if sf.size else 0.0)
    return complex(total)


def adjoint_section(F, f_coeffs, z):
    """Finite-section value of ``C_phi^* f`` at ``z``."""
    f = np.zeros(F.N, dtype=complex)
    c = np.asarray(f_coeffs, dtype=complex)[: F.N]
    f[: c.size] = c
    g = F.A.conj().T @ f
    return complex(np.polyval(g[::-1], z))
