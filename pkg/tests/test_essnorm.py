import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essnormal import (
    CombinationTerm,
    Jet,
    RationalMap,
    almost_inverse_data,
    basic_from_data,
    classify,
    combination_report,
    compose,
    contact_profile,
    decompose_into_basics,
    generate_ess_normal,
    is_compact_combination,
    is_outer_regular,
    jet_of_rational,
    order_of_contact_at,
    sigma_branch_jet,
    using_tolerances,
)
from essnormal.essnorm import (
    COMPACT,
    NONTRIVIAL,
    NOT_EN,
    OUT_OF_SCOPE,
    decomposition_certificate,
    half_plane_map,
    pole_superposition_map,
    sigma_contact_order,
)
from essnormal.errors import (
    AmbiguousGrouping,
    CriticalContactPoint,
    InvalidAugmentationParameter,
    NotSelfMapOfDisk,
    OutOfScopeMap,
    TailNotStrictlyUpper,
)
from essnormal.ratfun import coeff_error, rotation

from .conftest import GOLDEN, PARABOLIC, random_generated, two_contact_maps

HALF_SHIFT = RationalMap([0.5, 0.5])


@pytest.mark.parametrize(
    "phi, verdict, reason",
    [
        (RationalMap([0, 0.5]), COMPACT, "NoContactPoints"),
        (RationalMap.constant(0.3j), COMPACT, "NoContactPoints"),
        (RationalMap([0, 0, 1]), NOT_EN, "BlaschkeDegreeAtLeast2"),
        (HALF_SHIFT, NOT_EN, "DerivativeNotOne"),
        (GOLDEN, NONTRIVIAL, None),
        (PARABOLIC, NONTRIVIAL, None),
        (RationalMap.identity(), OUT_OF_SCOPE, "Identity"),
        (rotation(0.4), OUT_OF_SCOPE, "Automorphism"),
        (RationalMap([-0.5, 1], [1, -0.5]), OUT_OF_SCOPE, "Automorphism"),
        (compose(rotation(0.5), GOLDEN), NOT_EN, "ContactPointNotFixed"),
    ],
)
def test_classification(phi, verdict, reason, validate):
    c = classify(phi)
    assert c.verdict == verdict
    assert c.reason == reason
    validate(c.to_json(), "classification")


def test_classification_numeric_fields():
    c = classify(GOLDEN)
    assert c.order == 4 and abs(c.zeta - 1) < 1e-7 and abs(c.derivative - 1) < 1e-7
    c = classify(PARABOLIC)
    assert c.order == 2 and abs(c.zeta - 1) < 1e-7 and abs(c.derivative - 1) < 1e-7
    c = classify(HALF_SHIFT)
    assert abs(c.derivative - 0.5) < 1e-7


def test_two_contact_maps_are_not_essentially_normal():
    for phi in two_contact_maps():
        assert classify(phi).reason == "MultipleContactPoints"


def test_classify_rejects_non_self_map():
    with pytest.raises(NotSelfMapOfDisk):
        classify(RationalMap([0, 1.2]))


# -- generator -------------------------------------------------------------------


def test_golden_generation():
    phi = generate_ess_normal(1, [(0, 1)], 1j)
    assert coeff_error(phi, GOLDEN) <= 1e-10


def test_golden_half_plane_map():
    f = half_plane_map([(0, 1)], 1j)
    want = RationalMap([0, 1, -1j], [1, -1j, -1])
    assert coeff_error(f, want) <= 1e-10


def test_parabolic_generation():
    assert coeff_error(generate_ess_normal(1, [], 1j), PARABOLIC) <= 1e-12


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_generated_maps_are_nontrivially_essentially_normal(rng, m):
    for _ in range(3):
        phi, zeta, _, _, n = random_generated(rng, m)
        c = classify(phi)
        assert c.verdict == NONTRIVIAL
        assert c.order == n
        assert abs(c.zeta - zeta) < 1e-7 and abs(c.derivative - 1) < 1e-7


def test_generation_with_rational_tail():
    w = RationalMap([-3, 2j], [1j, 1])  # 2i - 1/(z + i): Pick, strictly upper on the real line
    phi = generate_ess_normal(1, [(0.2, 1.5)], w)
    assert classify(phi).verdict == NONTRIVIAL


@pytest.mark.parametrize("w", [1.0, -1j, RationalMap([0, 1], [1, -1j])])
def test_tail_must_be_strictly_upper(w):
    with pytest.raises(TailNotStrictlyUpper):
        generate_ess_normal(1, [], w)


def test_steps_validated():
    with pytest.raises(InvalidAugmentationParameter):
        generate_ess_normal(1, [(0, -1)], 1j)
    with pytest.raises(OutOfScopeMap):
        generate_ess_normal(1, [(1j, 1)], 1j)


def test_generated_json(validate):
    validate(GOLDEN.to_json(), "map")


# -- compact combinations ----------------------------------------------------------


def test_difference_of_equal_data_is_compact(validate):
    basic = decompose_into_basics(GOLDEN)
    rep = combination_report([CombinationTerm(1, GOLDEN), CombinationTerm(-1, basic[0])])
    assert rep.compact
    validate(rep.to_json(), "combination")


def test_different_orders_do_not_cancel():
    rep = combination_report([(1, GOLDEN), (-1, PARABOLIC)])
    assert not rep.compact
    assert {g["order"] for g in rep.groups} == {2, 4}


def test_compact_terms_are_ignored():
    assert is_compact_combination([(2.0, RationalMap([0, 0.5])), (1j, RationalMap([0.1, 0, 0.2]))])


def test_scaled_copies_cancel():
    assert is_compact_combination([(2 + 1j, PARABOLIC), (-2 - 1j, PARABOLIC)])
    assert not is_compact_combination([(2, PARABOLIC), (-1.9, PARABOLIC)])


def test_blaschke_terms_rejected():
    with pytest.raises(OutOfScopeMap):
        combination_report([(1, RationalMap([0, 0, 1]))])


def test_ambiguous_grouping(caplog):
    p = contact_profile(GOLDEN).points[0]
    d = p.data.derivatives().copy()
    d[4] += 5e-6j
    near = basic_from_data(1, Jet.from_derivatives(1, d))
    with caplog.at_level(logging.WARNING, logger="essnormal.essnorm"):
        with pytest.raises(AmbiguousGrouping):
            combination_report([(1, GOLDEN), (-1, near)])
    assert "ambiguous" in caplog.text


def test_distinct_data_form_separate_groups():
    p = contact_profile(GOLDEN).points[0]
    d = p.data.derivatives().copy()
    d[4] += 0.5j
    other = basic_from_data(1, Jet.from_derivatives(1, d))
    rep = combination_report([(1, GOLDEN), (-1, other)])
    assert len(rep.groups) == 2 and not rep.compact


# -- basic functions and decomposition -------------------------------------------


def test_basic_function_reproduces_data():
    p = contact_profile(GOLDEN).points[0]
    b = basic_from_data(p.zeta, p.data)
    assert b.degree == 3
    n, data = order_of_contact_at(b, 1)
    assert n == 4
    assert np.allclose(data.derivatives(), p.data.derivatives(), atol=1e-8)
    assert len(contact_profile(b).points) == 1


@pytest.mark.parametrize("k", range(3))
def test_decomposition_of_two_contact_fixtures(k, validate):
    phi = two_contact_maps()[k]
    basics = decompose_into_basics(phi)
    assert len(basics) == 2
    assert decomposition_certificate(phi, basics)
    prof = contact_profile(phi)
    for p, b in zip(prof.points, basics):
        pb = contact_profile(b).points
        assert len(pb) == 1 and abs(pb[0].zeta - p.zeta) < 1e-8 and pb[0].order == p.order


def test_decomposition_rejects_blaschke():
    with pytest.raises(OutOfScopeMap):
        decompose_into_basics(RationalMap([0, 0, 1]))


def test_three_contact_superposition():
    phi = pole_superposition_map([-1, 0, 2], [1, 0.5, 1])
    basics = decompose_into_basics(phi)
    assert len(basics) == 3 and decomposition_certificate(phi, basics)


# -- the branch sigma --------------------------------------------------------------


@pytest.mark.parametrize("phi, zeta, n, c", [(GOLDEN, 1, 4, -6), (PARABOLIC, 1, 2, 2), (HALF_SHIFT, 1, 2, 0.5)])
def test_almost_inverse_constants(phi, zeta, n, c):
    got, sp, ps = almost_inverse_data(phi, zeta)
    assert abs(got - c) < 1e-8
    assert sigma_contact_order(phi, zeta, n) == n


def test_almost_inverse_constant_matches_symbolic_oracle():
    import sympy as sp

    z = sp.symbols("z")
    phi = (z + 1) ** 2 / (z**2 - 2 * z + 5)
    ext = (5 * z**2 - 2 * z + 1) / (z + 1) ** 2  # q#/p#
    want = sp.diff(phi, z, 4).subs(z, 1) - sp.diff(ext, z, 4).subs(z, 1)
    got, _, _ = almost_inverse_data(GOLDEN, 1)
    assert abs(got - complex(want)) < 1e-9


@pytest.mark.parametrize("m", [0, 1])
def test_almost_inverse_patterns(rng, m):
    for _ in range(5):
        phi, zeta, _, _, n = random_generated(rng, m)
        c, sp, ps = almost_inverse_data(phi, zeta)
        assert abs(c) > 1e-6
        d1 = complex(jet_of_rational(phi, zeta, 1).taylor[1])
        want = np.zeros(n + 1, dtype=complex)
        want[:2] = zeta, 1
        want[n] += c / d1
        assert np.max(np.abs(sp.derivatives() - want)) <= 1e-7 * max(1, np.max(np.abs(want)))
        # sigma is a local inverse of phi_e, not of phi: the defect sits at order n
        lam = phi(zeta)
        want[0] = lam
        want[n] = c / d1**n
        assert np.max(np.abs(ps.derivatives() - want)) <= 1e-7 * max(1, np.max(np.abs(want)))
        assert sigma_contact_order(phi, zeta, n) == n


def test_almost_inverse_at_order_six(rng):
    # longer chains lose digits in the jet of the inverse branch
    with using_tolerances(almost_inverse=1e-6):
        for _ in range(3):
            phi, zeta, _, _, n = random_generated(rng, 2)
            c, _, _ = almost_inverse_data(phi, zeta)
            assert n == 6 and abs(c) > 1e-6


def test_sigma_needs_noncritical_point():
    # the exterior map of z^2 is z^2 itself, critical at 0
    with pytest.raises(CriticalContactPoint):
        sigma_branch_jet(RationalMap([0, 0, 1]), 0, 2)


def test_sigma_inverts_exterior_map():
    s = sigma_branch_jet(GOLDEN, 1, 6)
    from essnormal import exterior_map, faa_di_bruno

    ident = faa_di_bruno(jet_of_rational(exterior_map(GOLDEN), 1, 6), s)
    assert np.allclose(ident.taylor, [1, 1, 0, 0, 0, 0, 0], atol=1e-10)


# -- outer regularity -------------------------------------------------------------


@pytest.mark.parametrize("phi, want", [(HALF_SHIFT, True), (GOLDEN, False), (PARABOLIC, True), (RationalMap([0, 0.5]), True)])
def test_outer_regularity(phi, want):
    assert is_outer_regular(phi) is want


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10_000))
def test_higher_contact_is_never_outer_regular(m, seed):
    phi, *_ = random_generated(np.random.default_rng(seed), m)
    assert not is_outer_regular(phi)
