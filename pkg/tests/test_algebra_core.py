"""Free graded Lie structure: terms, brackets, bases, and the embedding oracle."""

import pytest

from loopalg import (
    Coefficients,
    ad_v,
    basis_primitive_counts,
    bracket,
    beta_q,
    gen_u,
    gen_v,
    lie_normal_form,
    lyndon_basis,
    lyndon_words,
    primitive_dims_oracle,
    q_op,
    tensor_embedding,
)

C3 = Coefficients(3, 1)
C5 = Coefficients(5, 1)
C2 = Coefficients(2, 1)


def test_coefficients_validation():
    with pytest.raises(ValueError):
        Coefficients(4, 1)
    with pytest.raises(ValueError):
        Coefficients(3, 0)
    assert C3.odd and not C2.odd
    assert (C3.inv(2) * 2) % 3 == 1


def test_generator_degrees_and_parities():
    u, v = gen_u(2), gen_v(2)
    assert (u.degree, u.weight, u.parity) == (2, 1, 0)
    assert (v.degree, v.weight, v.parity) == (3, 1, 1)
    with pytest.raises(ValueError):
        gen_u(1)


def test_bracket_grading():
    u, v = gen_u(2), gen_v(2)
    b = bracket(u, v)
    assert b.degree == u.degree + v.degree + 1
    assert b.weight == 2
    assert b.render() == "L[u,v]"


def test_q_op_degree_weight_and_parity_rules():
    v = gen_v(2)
    q = q_op(C3, 1, v)
    assert q.degree == 3 * (v.degree + 1) - 1 == 11
    assert q.weight == 3
    bq = beta_q(C3, 1, v)
    assert bq.degree == 10
    # Odd primes only operate on odd loop degrees.
    with pytest.raises(ValueError):
        q_op(C3, 1, gen_u(2))
    # p = 2 has no lower operation and acts on every generator.
    assert q_op(C2, 1, gen_u(2)).degree == 2 * (2 + 1) - 1
    with pytest.raises(ValueError):
        beta_q(C2, 1, gen_v(2))


def test_lyndon_words_are_strictly_smaller_than_proper_suffixes():
    words = lyndon_words(6)
    assert "u" in words and "v" in words and "uv" in words
    for w in words:
        assert len(w) <= 6
        for i in range(1, len(w)):
            assert w < w[i:]


def test_lyndon_basis_degrees_weights_and_uvv_display():
    basis = lyndon_basis(C3, 2, 12)
    renders = {t.render() for t in basis.elements}
    # The two-letter and three-letter brackets in their display normal form.
    assert "L[u,v]" in renders
    assert "L[u,L[u,v]]" in renders
    assert "L[v,L[u,v]]" in renders  # word uvv brackets from the right
    assert "L[u,u]" in renders  # bracket-square of the even-degree generator
    for t in basis.elements:
        assert t.degree <= 12


def test_antisymmetry_in_the_tensor_embedding():
    # [x,y] + (-1)^((deg x + 1)(deg y + 1)) [y,x] embeds to zero.
    u, v = gen_u(2), gen_v(2)
    for x, y in [(u, v), (u, u), (v, v), (u, bracket(u, v)), (v, bracket(u, v))]:
        sign = (-1) ** ((x.degree + 1) * (y.degree + 1))
        lhs = tensor_embedding(bracket(x, y), 3)
        rhs = tensor_embedding(bracket(y, x), 3)
        total = dict(lhs)
        for w, c in rhs.items():
            total[w] = (total.get(w, 0) + sign * c) % 3
        assert not any(total.values())


def test_lie_normal_form_fixes_basis_elements_and_straightens_ad():
    basis = lyndon_basis(C3, 2, 12)
    for t in basis.elements:
        if t.is_lie:
            nf = lie_normal_form(t, C3, 2)
            assert nf.single() == (t, 1)


def test_ad_v_straightening_frozen_values():
    # ad_v(2, 2) = [v,[v,u]]; exact solve against the embedded Lyndon basis.
    nf = lie_normal_form(ad_v(2, 2), C3, 2)
    term, coeff = nf.single()
    assert term.render() == "L[v,L[u,v]]"
    assert coeff == 2
    nf1 = lie_normal_form(ad_v(2, 1), C3, 2)
    term1, coeff1 = nf1.single()
    assert term1.render() == "L[u,v]"
    assert coeff1 == 2  # [v,u] = 2[u,v] mod 3 by antisymmetry in these degrees


def test_lie_normal_form_rejects_non_bracket_input():
    with pytest.raises(ValueError):
        lie_normal_form(q_op(C3, 1, gen_v(2)), C3, 2)


# Frozen from primitive_dims_oracle (brute-force coproduct kernel); the
# fast count must agree dimension-by-dimension.
PRIM_DIMS_P3 = {3: 1, 4: 1, 6: 1, 7: 1, 10: 1, 11: 1, 12: 1, 13: 1, 14: 2, 15: 1, 16: 1}
PRIM_DIMS_P5 = {3: 1, 4: 1, 6: 1, 7: 1, 10: 1, 11: 1, 13: 1, 14: 2, 15: 1, 16: 1}


@pytest.mark.parametrize(
    "coeffs,frozen", [(C3, PRIM_DIMS_P3), (C5, PRIM_DIMS_P5)], ids=["p3", "p5"]
)
def test_primitive_counts_match_brute_force_oracle(coeffs, frozen):
    fast = basis_primitive_counts(coeffs, 2, 16)
    slow = primitive_dims_oracle(coeffs, 2, 16)
    assert fast == slow
    assert {d: c for d, c in fast.items() if c} == frozen
