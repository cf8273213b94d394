"""Staged homology engine: pages, survivors, acyclicity, range errors."""

import pytest

from loopalg import (
    AbstractGen,
    Coefficients,
    DifferentialError,
    LinComb,
    RangeIncompleteError,
    ScheduledMap,
    StagedModel,
    build_omega2_model,
    build_tensor_model,
    check_acyclic,
    compute_page,
    monomial,
    sigma_tau_classes,
    survivor_check,
    verify_presented_page,
)

C3 = Coefficients(3, 1)
C32 = Coefficients(3, 2)


def _model(gens, schedule, kind="commutative", coeffs=C3, max_degree=12, max_weight=3):
    return StagedModel(
        kind=kind,
        coeffs=coeffs,
        n=2,
        generators=tuple(gens),
        schedule=tuple(schedule),
        max_degree=max_degree,
        max_weight=max_weight,
        label="test",
    )


def _mono(gen):
    return monomial(((gen, 1),))


def test_model_validation_rejects_bad_kind_pages_and_inhomogeneous_values():
    a = AbstractGen("a", 3, 1)
    b = AbstractGen("b", 2, 1)
    with pytest.raises(ValueError):
        _model([a, b], [], kind="filtered")
    sched = ScheduledMap(1, {a: LinComb(3, [(_mono(b), 1)])})
    with pytest.raises(ValueError):
        _model([a, b], [sched, ScheduledMap(1, {})])
    with pytest.raises(ValueError):
        _model([a, b], [ScheduledMap(0, {})])
    skew = ScheduledMap(1, {b: LinComb(3, [(_mono(a), 1)])})  # raises degree
    with pytest.raises(ValueError):
        _model([a, b], [skew])


def test_differential_squaring_to_nonzero_is_rejected():
    a = AbstractGen("a", 2, 1)
    b = AbstractGen("b", 3, 1)
    c = AbstractGen("c", 4, 1)
    bad = ScheduledMap(
        1,
        {
            c: LinComb(3, [(_mono(b), 1)]),
            b: LinComb(3, [(_mono(a), 1)]),  # d(d(c)) = a != 0
        },
    )
    model = _model([a, b, c], [bad])
    with pytest.raises(DifferentialError):
        compute_page(model, 2, 0, 7)


def test_two_generator_contractible_model_dies_on_page_two():
    b = AbstractGen("b", 2, 1)
    a = AbstractGen("a", 3, 1)
    sched = ScheduledMap(1, {a: LinComb(3, [(_mono(b), 1)])})
    model = _model([b, a], [sched], max_degree=10, max_weight=2)
    page1 = compute_page(model, 1, 1, 5)
    dims1 = {(s.degree, s.weight): s.dim for s in page1.slices if s.dim}
    # Weight 1 holds the pair itself, weight 2 its products b^2 and ab.
    assert dims1 == {(2, 1): 1, (3, 1): 1, (4, 2): 1, (5, 2): 1}
    assert check_acyclic(model, 1, 1, 5)
    page2 = compute_page(model, 2, 1, 5)
    assert all(s.dim == 0 for s in page2.slices)
    assert {s.killed_by for s in page2.slices} == {1}


# T(u,v) word counts on letters of degree 3 and 4; frozen from the
# two-term recursion dim(d) = dim(d-3) + dim(d-4).
TENSOR_DIMS_N2_TO_14 = {3: 1, 4: 1, 6: 1, 7: 2, 8: 1, 9: 1, 10: 3, 11: 3, 12: 2, 13: 4, 14: 6}


def test_tensor_model_page_one_counts_words_and_page_two_is_zero():
    model = build_tensor_model(C3, 2, 14)
    page1 = compute_page(model, 1, 1, 14)
    got: dict[int, int] = {}
    for s in page1.slices:
        got[s.degree] = got.get(s.degree, 0) + s.dim
    assert {d: c for d, c in got.items() if c} == TENSOR_DIMS_N2_TO_14
    assert check_acyclic(model, 1, 1, 14)


def test_tensor_model_r2_survives_page_two_then_collapses():
    model = build_tensor_model(C32, 2, 12)
    page2 = compute_page(model, 2, 1, 12)
    got: dict[int, int] = {}
    for s in page2.slices:
        got[s.degree] = got.get(s.degree, 0) + s.dim
    assert {d: c for d, c in got.items() if c} == {
        d: c for d, c in TENSOR_DIMS_N2_TO_14.items() if d <= 12
    }
    page3 = compute_page(model, 3, 1, 12)
    assert all(s.dim == 0 for s in page3.slices)


def test_survivor_check_success_and_death_paths():
    classes = sigma_tau_classes(C32, 2, 1)
    model = build_omega2_model(C32, 2, 11, 3)
    ok_tau = survivor_check(model, classes.tau, 3)
    assert ok_tau.nonzero and ok_tau.page_reached == 3 and ok_tau.obstruction is None
    # One page past the pairing the pair dies, with the reason recorded.
    dead_tau = survivor_check(model, classes.tau, 4)
    assert not dead_tau.nonzero
    assert "not a cycle at page 3" in dead_tau.obstruction
    dead_sigma = survivor_check(model, classes.sigma, 4)
    assert not dead_sigma.nonzero
    assert "boundary" in dead_sigma.obstruction and "page-3" in dead_sigma.obstruction


def test_survivor_check_requires_target_past_page_one():
    classes = sigma_tau_classes(C3, 2, 1)
    model = build_omega2_model(C3, 2, 11, 3)
    with pytest.raises(ValueError):
        survivor_check(model, classes.tau, 1)


def test_weight_slices_outside_the_table_raise_instead_of_truncating():
    model = build_omega2_model(C3, 2, 15, 4)
    with pytest.raises(RangeIncompleteError) as err:
        compute_page(model, 1, 0, 15, weights=[5])
    assert "weight-5" in str(err.value) and "stops at degree 15" in str(err.value)


def test_eligible_weight_tracks_the_table_cap():
    model = build_omega2_model(C3, 2, 15, 4)
    assert model.table_cap == 15
    assert model.eligible_weight(4)  # slice bound 2*2*4 - 1 = 15 fits
    assert not model.eligible_weight(5)
    tensor = build_tensor_model(C3, 2, 14)
    assert tensor.table_cap is None
    assert tensor.eligible_weight(tensor.max_weight)
    assert not tensor.eligible_weight(tensor.max_weight + 1)


def test_verify_presented_page_accepts_true_claim_and_flags_false_one():
    model = build_tensor_model(C3, 2, 12)
    # Page 1 is the tensor algebra on the two letters themselves.
    claim = [(3, True), (4, False)]
    rep = verify_presented_page(model, 1, claim, 1, 12)
    assert rep.ok and not rep.mismatches
    bad = verify_presented_page(model, 1, [(3, True)], 1, 12)
    assert not bad.ok
    assert bad.mismatches  # every degree with a v-word disagrees
