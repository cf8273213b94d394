"""Free graded-commutative side: monomial bases, series, summand slices."""

import pytest

from loopalg import (
    Coefficients,
    CutoffError,
    dj_homology,
    dpk_top_groups,
    generator_table,
    monomial_basis,
    poincare_series,
)

C3 = Coefficients(3, 1)
C5 = Coefficients(5, 1)
C2 = Coefficients(2, 1)


def test_generator_table_respects_cutoffs_and_grading():
    table = generator_table(C3, 2, 12, 4)
    for g in table.generators:
        assert g.degree <= 12 and g.weight <= 4
    # Odd-degree generators square to zero, so their exponents stay below 2;
    # the monomial enumeration must respect that cap.
    for mono in monomial_basis(table, 10, 3):
        for term, e in mono.factors:
            if term.parity:
                assert e == 1


def test_generator_table_p2_stops_at_weight_two():
    table = generator_table(C2, 2, 12, 2)
    assert {g.render() for g in table.generators} == {
        "u",
        "v",
        "Q1^1[u]",
        "L[u,v]",
        "Q1^1[v]",
    }
    with pytest.raises(ValueError):
        generator_table(C2, 2, 12, 3)


def test_monomial_basis_rejects_out_of_table_requests():
    table = generator_table(C3, 2, 10, 3)
    with pytest.raises(CutoffError):
        monomial_basis(table, 11, 3)
    with pytest.raises(CutoffError):
        monomial_basis(table, 8, 4)


# Frozen from the closed-form/enumeration cross-check inside poincare_series.
SERIES_312_TO_10 = [1, 0, 1, 1, 1, 2, 2, 2, 3, 4, 5]


def test_poincare_series_agrees_with_frozen_run():
    table = generator_table(C3, 2, 10, 5)
    assert poincare_series(table, 10) == SERIES_312_TO_10


def test_weight_slices_partition_the_series():
    # Summand dims refine the Poincare series: summing over weights must
    # reproduce each degree coefficient exactly.
    table = generator_table(C3, 2, 11, 5)
    series = poincare_series(table, 11)
    totals = [0] * 12
    totals[0] = 1
    for j in range(1, 6):
        hom = dj_homology(C3, 2, j)
        for d, c in hom.dims.items():
            if d <= 11:
                totals[d] += c
    assert totals == series


# Frozen from the monomial enumeration for (p, r, n, j) = (3, 1, 2, 3).
DJ_3123_DIMS = {6: 1, 7: 2, 8: 2, 9: 2, 10: 2, 11: 1}


def test_dj_homology_weight_three_frozen_dims_and_basis_edges():
    hom = dj_homology(C3, 2, 3)
    assert hom.dims == DJ_3123_DIMS
    assert hom.basis[6] == ("u^3",)
    assert hom.basis[11] == ("Q1^1[v]^1",)
    assert set(hom.basis[10]) == {"L[v,L[u,v]]^1", "bQ1^1[v]^1"}


@pytest.mark.parametrize(
    "coeffs,n,k,conn,top",
    [
        (C3, 2, 1, 5, 11),
        (C3, 2, 2, 17, 35),
        (C5, 2, 1, 9, 19),
        (C3, 3, 1, 11, 17),
    ],
    ids=["p3n2k1", "p3n2k2", "p5n2k1", "p3n3k1"],
)
def test_dpk_top_groups_connectivity_top_and_subtop(coeffs, n, k, conn, top):
    tg = dpk_top_groups(coeffs, n, k)
    assert tg.connectivity == conn
    assert tg.top_degree == top
    assert [t.render() for t in tg.top_basis] == [f"Q1^{k}[v]"]
    assert len(tg.subtop_basis) == 2
    renders = [t.render() for t in tg.subtop_basis]
    assert f"bQ1^{k}[v]" in renders
    # The other subtop class is the iterated bracket ad_v^{p^k-1}(u).
    ad_render = renders[1 - renders.index(f"bQ1^{k}[v]")]
    assert ad_render.startswith("L[v,") and ad_render.count("L[") == coeffs.p**k - 1
