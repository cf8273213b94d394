"""Builders for the spectral-sequence inputs the engine runs.

Three models: the full double-loop algebra with its three scheduled
differentials, the free associative two-letter model one suspension up,
and the exterior-times-polynomial page model with one imposed
differential per operation index.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra_core import (
    Coefficients,
    LinComb,
    Term,
    Word,
    ad_v,
    beta_q,
    bracket,
    gen_u,
    gen_v,
    lie_normal_form,
    tensor_embedding,
)
from .bss import ScheduledMap, StagedModel, word
from .errors import DifferentialError, OracleMismatchError
from .freecomm import generator_table, monomial


@dataclass(frozen=True)
class AbstractGen:
    """Named generator with no internal structure (fibre-page model)."""

    name: str
    degree: int
    weight: int

    @property
    def parity(self) -> int:
        return self.degree % 2

    def render(self) -> str:
        return self.name

    def sort_key(self) -> tuple[int, int, str]:
        return (self.degree, self.weight, self.name)


@dataclass(frozen=True)
class ClassPair:
    """The weight-p^k bracket classes carrying the page-(r+1) differential.

    tau straightens the iterated bracket ad^{p^k-1}(v)(u); sigma is its
    partner one degree down, transgressed bracket by bracket.  Both are
    normal forms in the bracket basis.
    """

    k: int
    tau_term: Term
    tau: LinComb
    sigma: LinComb


def sigma_tau_classes(coeffs: Coefficients, n: int, k: int) -> ClassPair:
    if not coeffs.odd:
        raise ValueError("the bracket class pair is defined for odd p only")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    p = coeffs.p
    w = p**k
    tau_term = ad_v(n, w - 1)
    tau = lie_normal_form(tau_term, coeffs, n)
    if tau.single() is None:
        raise OracleMismatchError(
            "iterated bracket did not straighten to a single basis class"
        )
    inv2 = coeffs.inv(2)
    items = []
    for j in range(1, w):
        c = (comb(w, j) // p) % p
        if c:
            items.append(
                (bracket(ad_v(n, j - 1), ad_v(n, w - 1 - j)), c * inv2)
            )
    sigma = lie_normal_form(LinComb(p, items), coeffs, n)
    if not sigma:
        raise OracleMismatchError("transgressed bracket class vanished")
    for key in sigma.coeffs:
        if key.degree != tau_term.degree - 1 or key.weight != w:
            raise OracleMismatchError(
                "partner class is not homogeneous one degree below the bracket"
            )
    return ClassPair(k, tau_term, tau, sigma)


def _terms_to_monomials(expr: LinComb) -> LinComb:
    return LinComb(
        expr.p, [(monomial(((t, 1),)), c) for t, c in expr.coeffs.items()]
    )


def _leibniz_tree(term: Term, coeffs: Coefficients, n: int) -> LinComb:
    """v -> u extended over bracket expressions.

    The Koszul sign is taken one suspension up (degree + 1), the grading
    where the bracket itself is an honest pairing; with the unsuspended
    sign the extension is not even well defined modulo antisymmetry.
    """
    p = coeffs.p
    if term.shape == "v":
        return LinComb(p, [(gen_u(n), 1)])
    if term.shape == "u":
        return LinComb(p)
    items = []
    for lt, lc in _leibniz_tree(term.left, coeffs, n).coeffs.items():
        items.append((bracket(lt, term.right), lc))
    sign = -1 if (term.left.degree + 1) % 2 else 1
    for rt, rc in _leibniz_tree(term.right, coeffs, n).coeffs.items():
        items.append((bracket(term.left, rt), rc * sign))
    return LinComb(p, items)


def _word_diff(words: dict[Word, int], n: int, p: int) -> dict[Word, int]:
    """The letter substitution v -> u on tensor words, with prefix signs."""
    out: dict[Word, int] = {}
    for w, c in words.items():
        prefix = 0
        for i, letter in enumerate(w):
            if letter == "v":
                nw = w[:i] + ("u",) + w[i + 1 :]
                cc = (out.get(nw, 0) + (-1) ** prefix * c) % p
                if cc:
                    out[nw] = cc
                elif nw in out:
                    del out[nw]
            prefix += (2 * n - 1) if letter == "u" else 2 * n
    return out


def _bracket_differential(
    g: Term, coeffs: Coefficients, n: int
) -> LinComb:
    """Normal form of the page-r value on a bracket generator.

    Computed by the Leibniz recursion and verified against the tensor
    differential under the embedding; a disagreement means the sign
    convention is broken, so the build stops.
    """
    p = coeffs.p
    value = lie_normal_form(_leibniz_tree(g, coeffs, n), coeffs, n)
    via_words = _word_diff(tensor_embedding(g, p), n, p)
    if tensor_embedding(value, p) != via_words:
        raise DifferentialError(
            f"bracket differential on {g.render()} disagrees with the tensor "
            "differential; sign convention broken"
        )
    return value


def build_omega2_model(
    coeffs: Coefficients, n: int, max_degree: int, max_weight: int
) -> StagedModel:
    """The double-loop model with its full differential schedule.

    Page 1 pairs each operation generator with its Bockstein companion;
    page r sends v to u and extends over brackets; page r + 1 carries the
    imposed bracket-class differentials (unit normalised to 1).  For
    r = 1 the first two coincide and are merged.
    """
    if not coeffs.odd:
        raise ValueError("p = 2 is out of scope here; see loopalg.mod2")
    p = coeffs.p
    table = generator_table(coeffs, n, max_degree, max_weight)
    gen_set = set(table.generators)

    page1: dict = {}
    for g in table.generators:
        if g.shape == "q":
            bq = beta_q(coeffs, g.k, g.left)
            if bq not in gen_set:
                raise DifferentialError(
                    f"companion of {g.render()} is missing from the table"
                )
            page1[g] = LinComb(p, [(monomial(((bq, 1),)), 1)])

    pager: dict = {gen_v(n): LinComb(p, [(monomial(((gen_u(n), 1),)), 1)])}
    for g in table.generators:
        if g.shape == "bracket":
            value = _bracket_differential(g, coeffs, n)
            if value:
                pager[g] = _terms_to_monomials(value)

    taus: dict = {}
    k = 1
    while True:
        w = p**k
        if w > max_weight or 2 * n * w - 2 > max_degree:
            break
        pair = sigma_tau_classes(coeffs, n, k)
        tau_key, tau_coeff = pair.tau.single()
        if tau_key not in gen_set:
            raise DifferentialError(
                f"bracket class {tau_key.render()} is missing from the table"
            )
        taus[tau_key] = _terms_to_monomials(
            pair.sigma.scaled(coeffs.inv(tau_coeff))
        )
        k += 1

    r = coeffs.r
    if r == 1:
        schedule = [ScheduledMap(1, {**page1, **pager})]
    else:
        schedule = [ScheduledMap(1, page1), ScheduledMap(r, pager)]
    if taus:
        schedule.append(ScheduledMap(r + 1, taus))
    return StagedModel(
        "commutative",
        coeffs,
        n,
        table.generators,
        tuple(schedule),
        max_degree,
        max_weight,
        "omega2",
        table_cap=max_degree,
    )


def build_tensor_model(
    coeffs: Coefficients, n: int, max_degree: int
) -> StagedModel:
    """Free associative model on the two letters one suspension up.

    The single scheduled differential (page r) sends v to u.  Weight
    slices close on their own, so max_degree only sizes the default
    window.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if max_degree < 2 * n - 1:
        raise ValueError(
            f"max_degree {max_degree} is below the bottom letter degree {2 * n - 1}"
        )
    p = coeffs.p
    ue = Term("u", 2 * n - 1, 1)
    ve = Term("v", 2 * n, 1)
    sched = ScheduledMap(coeffs.r, {ve: LinComb(p, [(word((ue,)), 1)])})
    return StagedModel(
        "associative",
        coeffs,
        n,
        (ue, ve),
        (sched,),
        max_degree,
        max(1, max_degree // (2 * n - 1)),
        "tensor",
    )


def build_fibre_page_model(
    coeffs: Coefficients,
    n: int,
    k_max: int,
    max_degree: int,
    include_tau0: bool = True,
    ell: int = 1,
) -> StagedModel:
    """Exterior-times-polynomial page model with one differential per k.

    Generators tau'_k (odd, degree 2np^k - 1, k >= 0) and sigma'_k (even,
    degree 2np^k - 2, k >= 1); the page-(r+1) differential sends tau'_k
    to ell * sigma'_k for k >= 1 and kills tau'_0.  Weight slices below
    p^(k_max+1) are complete.  include_tau0=False drops the tau'_0 line,
    which is a permanent cycle and often just noise in acyclicity runs.
    """
    if not coeffs.odd:
        raise ValueError("the page model is built for odd p")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    p = coeffs.p
    if ell % p == 0:
        raise ValueError("the differential unit must be nonzero mod p")
    gens: list[AbstractGen] = []
    if include_tau0:
        gens.append(AbstractGen("tau'_0", 2 * n - 1, 1))
    values: dict = {}
    for k in range(1, k_max + 1):
        w = p**k
        tau = AbstractGen(f"tau'_{k}", 2 * n * w - 1, w)
        sigma = AbstractGen(f"sigma'_{k}", 2 * n * w - 2, w)
        gens.extend([tau, sigma])
        values[tau] = LinComb(p, [(monomial(((sigma, 1),)), ell)])
    gens.sort(key=lambda g: g.sort_key())
    return StagedModel(
        "commutative",
        coeffs,
        n,
        tuple(gens),
        (ScheduledMap(coeffs.r + 1, values),),
        max_degree,
        p ** (k_max + 1) - 1,
        "fibre",
    )
