import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essnormal import RationalMap, adjoint_pointwise, compactness_diagnostic, cphi_matrix, self_commutator, using_tolerances
from essnormal.errors import BranchCollision, SeriesDivergenceRisk
from essnormal.h2num import adjoint_section, commutator_singular_values

from .conftest import GOLDEN, PARABOLIC


def test_columns_are_powers_of_polynomial_symbol():
    c = np.array([0.1, 0.5, 0.2j])
    F = cphi_matrix(RationalMap(c), 12)
    p = np.array([1.0 + 0j])
    for k in range(12):
        col = np.zeros(12, dtype=complex)
        col[: min(12, p.size)] = p[:12]
        assert np.allclose(F.A[:, k], col, atol=1e-14)
        p = np.polynomial.polynomial.polymul(p, c)


def test_columns_match_symbolic_series():
    import sympy as sp

    z = sp.symbols("z")
    expr = (z + 1) ** 2 / (z**2 - 2 * z + 5)
    N = 8
    F = cphi_matrix(GOLDEN, N)
    for k in (1, 2, 5):
        ser = sp.series(expr**k, z, 0, N).removeO()
        want = [complex(ser.coeff(z, j)) for j in range(N)]
        assert np.allclose(F.A[:, k], want, atol=1e-13)


def test_section_is_read_only():
    F = cphi_matrix(PARABOLIC, 4)
    with pytest.raises(ValueError):
        F.A[0, 0] = 2


def test_compensated_products_agree_with_plain():
    plain = cphi_matrix(GOLDEN, 48).A
    with using_tolerances(kahan_min_size=8):
        comp = cphi_matrix(GOLDEN, 48).A
    assert np.max(np.abs(plain - comp)) < 1e-14


def test_divergence_risk():
    with pytest.raises(SeriesDivergenceRisk):
        cphi_matrix(RationalMap([1.2, 0.1]), 8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0.1, 1.0))
def test_normal_symbols_commute(theta, r):
    lam = r * np.exp(1j * theta)
    C = self_commutator(cphi_matrix(RationalMap([0, lam]), 32))
    assert np.max(np.abs(C)) <= 1e-12


@pytest.mark.parametrize("phi", [GOLDEN, PARABOLIC, RationalMap([0.1, 0.3, 0.2])])
def test_commutator_is_hermitian(phi):
    C = self_commutator(cphi_matrix(phi, 40))
    assert np.allclose(C, C.conj().T, atol=1e-12)


def test_singular_values_sorted():
    s = commutator_singular_values(PARABOLIC, 32)
    assert np.all(np.diff(s) <= 1e-12)


def test_diagnostic_vanishing_commutator(validate):
    rep = compactness_diagnostic(RationalMap([0, 0.6j]), sizes=(16, 32))
    assert rep.verdict_hint == "decay-consistent"
    assert max(rep.sigma_1) <= 1e-12
    validate(rep.to_json(), "diagnostic")


def test_diagnostic_blaschke_non_decay():
    rep = compactness_diagnostic(RationalMap([0, 0, 1]), sizes=(32, 64))
    assert rep.verdict_hint == "non-decay"
    assert all(q >= 0.5 * s for q, s in zip(rep.sigma_quarter, rep.sigma_1))


def test_probes_beyond_size_are_null(validate):
    rep = compactness_diagnostic(PARABOLIC, sizes=(8, 32))
    assert rep.probes[16][0] is None and rep.probes[16][1] is not None
    validate(rep.to_json(), "diagnostic")


def test_csv_export():
    rep = compactness_diagnostic(PARABOLIC, sizes=(4, 8))
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["N", "k", "sigma"]
    assert len(rows) == 1 + 4 + 8
    assert float(rows[1][2]) == pytest.approx(rep.sigma_1[0])


def test_unsorted_sizes_rejected():
    with pytest.raises(ValueError):
        compactness_diagnostic(PARABOLIC, sizes=(64, 32))


@pytest.mark.xfail(strict=True, reason="finite-section sigma_16 grows with N for these symbols")
@pytest.mark.parametrize("phi", [GOLDEN, PARABOLIC], ids=["golden", "parabolic"])
def test_essentially_normal_symbols_look_decaying(phi):
    rep = compactness_diagnostic(phi)
    assert rep.verdict_hint == "decay-consistent"


@pytest.mark.parametrize("phi", [GOLDEN, PARABOLIC], ids=["golden", "parabolic"])
def test_essentially_normal_symbols_small_tail(phi):
    # the part of the decay picture that the sections do show
    rep = compactness_diagnostic(phi)
    s = rep.singular_values[256]
    assert s[15] < 0.1 * s[0]


@pytest.mark.parametrize("phi", [GOLDEN, PARABOLIC, RationalMap([0.2, 0.5]), RationalMap([0.1, 0, 0.6], [2, 1])])
def test_adjoint_formula_matches_section(phi):
    rng = np.random.default_rng(3)
    F = cphi_matrix(phi, 128)
    for _ in range(5):
        z = 0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        f = (rng.normal(size=6) + 1j * rng.normal(size=6)) / (1 + np.arange(6))
        assert abs(adjoint_pointwise(phi, f, z) - adjoint_section(F, f, z)) <= 1e-6


def test_adjoint_of_constant_symbol():
    f = np.array([2.0, 1.0, 3.0])
    # C_c f = f(c) 1, so C_c^* f = f(0) k_c with k_c(z) = 1/(1 - conj(c) z)
    c, z = 0.3j, 0.2
    got = adjoint_pointwise(RationalMap.constant(c), f, z)
    assert got == pytest.approx(f[0] / (1 - np.conj(c) * z))


def test_branch_collision_at_critical_value():
    # the exterior map of 0.5 z^2 is 2 z^2, critical value 0
    with pytest.raises(BranchCollision):
        adjoint_pointwise(RationalMap([0, 0, 0.5]), [1, 1], 0.0)
