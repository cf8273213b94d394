"""Free graded-commutative algebra on the double-loop generator table.

For odd p the algebra is exterior on odd generators and polynomial on even
ones; for p = 2 it is polynomial throughout but only weight <= 2 is in
scope here (the mod-2 analysis lives in loopalg.mod2).  The weight grading
counts Moore-space cells: u, v weigh 1, brackets add weights, operations
multiply them by p^k.  Weight-j slices are the homology of the j-adic
stable summands of the double loop space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .algebra_core import (
    Coefficients,
    LieBasis,
    Term,
    ad_v,
    beta_q,
    gen_u,
    gen_v,
    lie_normal_form,
    lyndon_basis,
    q_op,
)
from .errors import CutoffError, OracleMismatchError


@dataclass(frozen=True)
class Monomial:
    """Product of table generators; factors stay in table order."""

    factors: tuple[tuple[Term, int], ...]
    degree: int
    weight: int

    def render(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{t.render()}^{e}" for t, e in self.factors)

    def sort_key(self) -> tuple[int, int, str]:
        return (self.degree, self.weight, self.render())


def monomial(factors: tuple[tuple[Term, int], ...]) -> Monomial:
    degree = sum(t.degree * e for t, e in factors)
    weight = sum(t.weight * e for t, e in factors)
    return Monomial(factors, degree, weight)


UNIT = Monomial((), 0, 0)


@dataclass(frozen=True)
class GeneratorTable:
    """All algebra generators with degree <= max_degree, weight <= max_weight."""

    coeffs: Coefficients
    n: int
    max_degree: int
    max_weight: int
    generators: tuple[Term, ...]

    def slice(self, degree: int, weight: int) -> list[Term]:
        return [g for g in self.generators if g.degree == degree and g.weight == weight]

    def lie_slice(self, degree: int, weight: int) -> list[Term]:
        return [g for g in self.slice(degree, weight) if g.is_lie()]


def generator_table(
    coeffs: Coefficients, n: int, max_degree: int, max_weight: int
) -> GeneratorTable:
    """Generator list: desuspended brackets plus operation pairs.

    Odd p: every bracket-basis element of odd degree feeds the operation
    tower Q1^k and its Bockstein companion bQ1^k (k >= 1).  p = 2: the
    tower applies to every bracket-basis element and has no separate
    Bockstein companions; only max_weight <= 2 is supported.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if max_weight < 1:
        raise ValueError(f"max_weight must be >= 1, got {max_weight}")
    if max_degree < 2 * n - 2:
        raise ValueError(
            f"max_degree {max_degree} is below the bottom generator degree {2 * n - 2}"
        )
    if not coeffs.odd and max_weight > 2:
        raise ValueError(
            "p = 2 tables stop at weight 2; see loopalg.mod2 for the weight-2 analysis"
        )
    lie = [
        t
        for t in lyndon_basis(coeffs, n, max_degree).elements
        if t.weight <= max_weight
    ]
    gens: list[Term] = list(lie)
    p = coeffs.p
    for c in lie:
        if coeffs.odd and c.degree % 2 == 0:
            continue
        k = 1
        while True:
            q = q_op(coeffs, k, c)
            low_degree = q.degree - 1 if coeffs.odd else q.degree
            if q.weight > max_weight or low_degree > max_degree:
                break
            if q.degree <= max_degree:
                gens.append(q)
            if coeffs.odd:
                bq = beta_q(coeffs, k, c)
                if bq.degree <= max_degree:
                    gens.append(bq)
            k += 1
    gens.sort(key=Term.sort_key)
    return GeneratorTable(coeffs, n, max_degree, max_weight, tuple(gens))


def monomial_basis(table: GeneratorTable, degree: int, weight: int) -> list[Monomial]:
    """All monomials of the exact degree and weight, sorted by rendering."""
    if degree < 0 or degree > table.max_degree:
        raise CutoffError(
            f"degree {degree} outside the table cutoff {table.max_degree}"
        )
    if weight < 0 or weight > table.max_weight:
        raise CutoffError(
            f"weight {weight} outside the table cutoff {table.max_weight}"
        )
    n = table.n
    odd_exponent_cap = table.coeffs.odd
    out: list[Monomial] = []
    gens = table.generators

    def extend(i: int, factors: list[tuple[Term, int]], deg: int, wt: int) -> None:
        if wt == 0:
            if deg == 0:
                out.append(monomial(tuple(factors)))
            return
        if deg < (2 * n - 2) * wt or deg > 2 * n * wt - 1 or i >= len(gens):
            return
        g = gens[i]
        cap = wt // g.weight
        if g.degree:
            cap = min(cap, deg // g.degree)
        if odd_exponent_cap and g.parity == 1:
            cap = min(cap, 1)
        for e in range(cap, -1, -1):
            if e:
                factors.append((g, e))
                extend(i + 1, factors, deg - e * g.degree, wt - e * g.weight)
                factors.pop()
            else:
                extend(i + 1, factors, deg, wt)
    extend(0, [], degree, weight)
    out.sort(key=lambda m: m.render())
    return out


def poincare_series(table: GeneratorTable, max_degree: int) -> list[int]:
    """Coefficients of the Poincare series through max_degree.

    Counted two ways: by enumerating monomials weight by weight and by the
    closed-form product over generators (geometric factors for polynomial
    generators, 1 + t^d for exterior ones).  A disagreement aborts.
    """
    if max_degree > table.max_degree:
        raise CutoffError(
            f"max_degree {max_degree} outside the table cutoff {table.max_degree}"
        )
    n = table.n
    weight_bound = max_degree // (2 * n - 2)
    if weight_bound > table.max_weight:
        raise CutoffError(
            f"degrees through {max_degree} need weights through {weight_bound}, "
            f"table stops at {table.max_weight}"
        )
    counted = [0] * (max_degree + 1)
    counted[0] = 1
    for w in range(1, weight_bound + 1):
        for d in range((2 * n - 2) * w, min(max_degree, 2 * n * w - 1) + 1):
            counted[d] += len(monomial_basis(table, d, w))
    series = [0] * (max_degree + 1)
    series[0] = 1
    for g in table.generators:
        if table.coeffs.odd and g.parity == 1:
            nxt = series[:]
            for i in range(g.degree, max_degree + 1):
                nxt[i] += series[i - g.degree]
            series = nxt
        else:
            for i in range(g.degree, max_degree + 1):
                series[i] += series[i - g.degree]
    if series != counted:
        raise OracleMismatchError(
            f"monomial count and closed-form series disagree: {counted} vs {series}"
        )
    return counted


@dataclass(frozen=True)
class SummandHomology:
    """Weight-j slice of the algebra, presented degree by degree."""

    j: int
    dims: dict[int, int]
    basis: dict[int, tuple[str, ...]]

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "dims": {str(d): k for d, k in sorted(self.dims.items())},
            "basis": {str(d): list(b) for d, b in sorted(self.basis.items())},
        }


def dj_homology(coeffs: Coefficients, n: int, j: int) -> SummandHomology:
    """Homology of the weight-j stable summand as a graded vector space."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    table = generator_table(coeffs, n, 2 * n * j, j)
    dims: dict[int, int] = {}
    basis: dict[int, tuple[str, ...]] = {}
    for d in range((2 * n - 2) * j, 2 * n * j):
        monos = monomial_basis(table, d, j)
        if monos:
            dims[d] = len(monos)
            basis[d] = tuple(m.render() for m in monos)
    return SummandHomology(j, dims, basis)


class TopGroups(NamedTuple):
    connectivity: int
    top_degree: int
    top_basis: tuple[Term, ...]
    subtop_basis: tuple[Term, ...]


def dpk_top_groups(coeffs: Coefficients, n: int, k: int) -> TopGroups:
    """Connectivity and the two top homology groups of the weight-p^k summand.

    Everything is verified against the monomial enumeration: the top degree
    carries exactly the operation class, the degree below it exactly the
    Bockstein companion and one iterated bracket, and nothing lives above.
    For k = 0 the summand is the Moore space itself.
    """
    if not coeffs.odd:
        raise ValueError("p = 2 is handled by loopalg.mod2")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    n_ = n
    if k == 0:
        return TopGroups(2 * n_ - 3, 2 * n_ - 1, (gen_v(n_),), (gen_u(n_),))
    w = coeffs.p**k
    table = generator_table(coeffs, n, 2 * n * w, w)
    connectivity = 2 * n * w - 2 * w - 1
    top = 2 * n * w - 1
    bottom = monomial_basis(table, connectivity + 1, w)
    if not bottom:
        raise OracleMismatchError("expected the bottom power class at connectivity + 1")
    if monomial_basis(table, 2 * n * w, w):
        raise OracleMismatchError(f"monomials found above the top degree {top}")
    q = q_op(coeffs, k, gen_v(n))
    top_monos = monomial_basis(table, top, w)
    if [m.render() for m in top_monos] != [f"{q.render()}^1"]:
        raise OracleMismatchError(
            f"top degree {top} basis {[m.render() for m in top_monos]} is not the "
            "operation class alone"
        )
    bq = beta_q(coeffs, k, gen_v(n))
    sub_monos = monomial_basis(table, top - 1, w)
    lie_at_sub = table.lie_slice(top - 1, w)
    expected = sorted([f"{bq.render()}^1", f"{lie_at_sub[0].render()}^1"]) if len(
        lie_at_sub
    ) == 1 else None
    if expected is None or sorted(m.render() for m in sub_monos) != expected:
        raise OracleMismatchError(
            f"degree {top - 1} basis {[m.render() for m in sub_monos]} is not the "
            "expected two classes"
        )
    ad_term = ad_v(n, w - 1)
    nf = lie_normal_form(ad_term, coeffs, n)
    single = nf.single()
    if single is None or single[0] != lie_at_sub[0]:
        raise OracleMismatchError(
            "iterated bracket does not straighten to the basis class below the top"
        )
    return TopGroups(connectivity, top, (q,), (bq, ad_term))
