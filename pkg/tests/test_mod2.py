"""Mod-2 six-class module, its splittings, and the integral chain identity."""

import numpy as np
import pytest

from loopalg import build_d2_module, decomposition_search, verify_chain_identity

RENDERS = ("u^2", "Q1^1[u]^1", "u^1*v^1", "L[u,v]^1", "v^2", "Q1^1[v]^1")


def _images(module, mat):
    return {
        module.classes[j].render(): module.render_vector(mat[:, j])
        for j in range(len(module.classes))
        if mat[:, j].any()
    }


@pytest.mark.parametrize("n", [2, 3])
def test_r1_sq_and_bockstein_values(n):
    m = build_d2_module(1, n)
    assert tuple(c.render() for c in m.classes) == RENDERS
    assert _images(m, m.sq1) == {
        "u^1*v^1": "u^2",
        "Q1^1[v]^1": "L[u,v]^1 + v^2",
    }
    assert _images(m, m.sq2) == {
        "v^2": "u^2",
        "Q1^1[v]^1": "Q1^1[u]^1",
    }
    pages = dict(m.bocksteins)
    assert sorted(pages) == [1, 2]
    assert np.array_equal(pages[1], m.sq1)
    assert _images(m, pages[2]) == {"L[u,v]^1": "Q1^1[u]^1"}


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_higher_r_sq_and_bockstein_values(r, n):
    m = build_d2_module(r, n)
    assert tuple(c.render() for c in m.classes) == RENDERS
    # Only the first Bockstein remains visible to the Steenrod action.
    assert _images(m, m.sq1) == {"Q1^1[v]^1": "v^2"}
    assert not m.sq2.any()
    pages = dict(m.bocksteins)
    assert sorted(pages) == [1, r, r + 1]
    assert np.array_equal(pages[1], m.sq1)
    assert _images(m, pages[r]) == {"u^1*v^1": "u^2"}
    assert _images(m, pages[r + 1]) == {"L[u,v]^1": "Q1^1[u]^1"}


def test_class_degrees_shift_with_n():
    for n in (2, 3):
        m = build_d2_module(1, n)
        base = 4 * n - 4
        assert [c.degree for c in m.classes] == [
            base,
            base + 1,
            base + 1,
            base + 2,
            base + 2,
            base + 3,
        ]


def test_r1_module_admits_no_splitting():
    assert decomposition_search(build_d2_module(1, 2)) == []


@pytest.mark.parametrize("r", [2, 3])
def test_higher_r_module_splits_and_isolates_the_bracket_pair(r):
    decs = decomposition_search(build_d2_module(r, 2))
    # Frozen count from the exhaustive 256-candidate enumeration.
    assert len(decs) == 8
    assert any(d.isolates(("L[u,v]^1", "Q1^1[u]^1")) for d in decs)
    for d in decs:
        # Two complementary parts covering all six classes.
        assert len(d.parts) == 2
        assert len(d.parts[0]) + len(d.parts[1]) == 6


def test_decompositions_are_sorted_and_deduplicated():
    decs = decomposition_search(build_d2_module(2, 2))
    parts = [d.parts for d in decs]
    assert parts == sorted(parts)
    assert len(set(parts)) == len(parts)
    # Unordered: no decomposition appears with its two parts swapped.
    assert all((b, a) not in parts for (a, b) in parts)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_chain_identity_coefficient(r):
    rep = verify_chain_identity(r)
    assert rep.coefficient == rep.expected == -(2 ** (r + 1))
    assert rep.intermediate_zero
    assert rep.ok and bool(rep)


def test_chain_identity_validation_and_json():
    with pytest.raises(ValueError):
        verify_chain_identity(0)
    js = verify_chain_identity(2).to_json()
    assert js["coefficient"] == -8 and js["ok"] is True


def test_module_json_roundtrips_basic_fields():
    m = build_d2_module(2, 2)
    js = m.to_json()
    assert js["r"] == 2 and js["n"] == 2
    assert [c["render"] for c in js["classes"]] == list(RENDERS)
    assert len(js["bocksteins"]) == 3
