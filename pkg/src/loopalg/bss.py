"""Staged homology engine for filtered differential algebras.

A StagedModel is a free graded algebra (commutative on a generator table,
or associative on a word alphabet) together with a schedule of derivations,
one per page.  Page 1 is the whole algebra; page s+1 is the homology of
page s under the page-s derivation, computed on explicit representative
vectors.  Every derivation preserves the weight grading and lowers degree
by one, so each weight slice is a finite complex that can be closed
completely inside the configured cutoffs; a request that cannot be closed
raises RangeIncompleteError rather than truncating.

Degree conventions differ per model (the commutative double-loop model is
graded by loop degree, the associative model one suspension up); the engine
only relies on the degree/weight data the generators carry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra_core import Coefficients, LinComb, Term
from .errors import DifferentialError, RangeIncompleteError
from .freecomm import Monomial, monomial


@dataclass(frozen=True)
class WordMono:
    """Word in the associative model; letters in written order."""

    letters: tuple[Term, ...]
    degree: int
    weight: int

    def render(self) -> str:
        if not self.letters:
            return "1"
        parts: list[tuple[str, int]] = []
        for t in self.letters:
            name = t.render()
            if parts and parts[-1][0] == name:
                parts[-1] = (name, parts[-1][1] + 1)
            else:
                parts.append((name, 1))
        return "*".join(f"{name}^{e}" for name, e in parts)

    def sort_key(self) -> tuple[int, int, str]:
        return (self.degree, self.weight, self.render())


def word(letters: tuple[Term, ...]) -> WordMono:
    return WordMono(
        letters,
        sum(t.degree for t in letters),
        sum(t.weight for t in letters),
    )


@dataclass(frozen=True)
class ScheduledMap:
    """Weight-preserving, degree-lowering derivation attached to one page.

    values maps generators to their images (LinComb over monomials or
    words); unlisted generators map to zero.
    """

    page: int
    values: dict


@dataclass(frozen=True)
class StagedModel:
    kind: str  # "commutative" | "associative"
    coeffs: Coefficients
    n: int
    generators: tuple
    schedule: tuple[ScheduledMap, ...]
    max_degree: int
    max_weight: int
    label: str
    # degree through which the generator table is complete; None when the
    # generator list is not degree-truncated (tensor, fibre)
    table_cap: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("commutative", "associative"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        pages = [s.page for s in self.schedule]
        if len(pages) != len(set(pages)):
            raise ValueError("schedule lists a page twice")
        if any(s.page < 1 for s in self.schedule):
            raise ValueError("pages are indexed from 1")
        for s in self.schedule:
            for g, val in s.values.items():
                for key in val.coeffs:
                    if key.degree != g.degree - 1 or key.weight != g.weight:
                        raise ValueError(
                            f"page-{s.page} value on {g.render()} is not "
                            "homogeneous of degree - 1 and equal weight"
                        )

    def scheduled(self, page: int) -> ScheduledMap | None:
        for s in self.schedule:
            if s.page == page:
                return s
        return None

    def slice_degree_bound(self, weight: int) -> int:
        top = 2 * self.n * weight
        return top if self.kind == "associative" else top - 1

    def eligible_weight(self, weight: int) -> bool:
        if weight > self.max_weight:
            return False
        return self.table_cap is None or self.slice_degree_bound(weight) <= self.table_cap

    def min_slice_degree(self, weight: int) -> int:
        ratio = min(Fraction(g.degree, g.weight) for g in self.generators)
        return -((-weight * ratio.numerator) // ratio.denominator)

    def to_json(self) -> dict:
        sched = []
        for s in sorted(self.schedule, key=lambda s: s.page):
            for g in sorted(s.values, key=lambda g: g.sort_key()):
                val = s.values[g]
                sched.append(
                    {
                        "page": s.page,
                        "on": g.render(),
                        "value": [
                            {"monomial": m.render(), "coeff": int(c)}
                            for m, c in val.items_sorted()
                        ],
                    }
                )
        return {
            "kind": self.kind,
            "generators": [
                {
                    "term": g.render(),
                    "degree": g.degree,
                    "weight": g.weight,
                    "parity": g.parity,
                }
                for g in self.generators
            ],
            "schedule": sched,
        }


# ---------------------------------------------------------------------------
# Monomial arithmetic


def _mul_monomials(a: Monomial, b: Monomial, p: int):
    """Product in the commutative model: (sign, monomial) or (0, None)."""
    sign = 1
    if p != 2:
        a_odd = [t.sort_key() for t, _ in a.factors if t.parity]
        b_odd = [t.sort_key() for t, _ in b.factors if t.parity]
        if set(a_odd) & set(b_odd):
            return 0, None
        crossings = sum(1 for x in a_odd for y in b_odd if y < x)
        if crossings % 2:
            sign = -1
    exps: dict = {}
    for t, e in a.factors + b.factors:
        exps[t] = exps.get(t, 0) + e
    factors = tuple(sorted(exps.items(), key=lambda te: te[0].sort_key()))
    return sign, monomial(factors)


def _derive_commutative(values: dict, m: Monomial, p: int) -> dict:
    out: dict = {}
    prefix_deg = 0
    for i, (g, e) in enumerate(m.factors):
        val = values.get(g)
        if val is not None and val:
            sign = -1 if (prefix_deg * g.degree) % 2 else 1
            rest = list(m.factors)
            if e == 1:
                del rest[i]
            else:
                rest[i] = (g, e - 1)
            rest_mono = monomial(tuple(rest))
            for vm, vc in val.coeffs.items():
                s2, prod = _mul_monomials(vm, rest_mono, p)
                if prod is None:
                    continue
                c = (out.get(prod, 0) + sign * e * vc * s2) % p
                if c:
                    out[prod] = c
                elif prod in out:
                    del out[prod]
        prefix_deg += e * g.degree
    return out


def _derive_word(values: dict, w: WordMono, p: int) -> dict:
    out: dict = {}
    prefix_deg = 0
    for i, g in enumerate(w.letters):
        val = values.get(g)
        if val is not None and val:
            sign = -1 if prefix_deg % 2 else 1
            for vw, vc in val.coeffs.items():
                new = word(w.letters[:i] + vw.letters + w.letters[i + 1 :])
                c = (out.get(new, 0) + sign * vc) % p
                if c:
                    out[new] = c
                elif new in out:
                    del out[new]
        prefix_deg += g.degree
    return out


# ---------------------------------------------------------------------------
# Weight slices


class _WeightSlice:
    """Complete (degree, weight)-graded complex for one weight."""

    def __init__(self, model: StagedModel, weight: int):
        self.model = model
        self.weight = weight
        self.p = model.coeffs.p
        monos = (
            _commutative_monomials(model, weight)
            if model.kind == "commutative"
            else _word_monomials(model, weight)
        )
        by_degree: dict[int, list] = {}
        for m in monos:
            by_degree.setdefault(m.degree, []).append(m)
        self.d_lo = min(by_degree) if by_degree else 0
        self.d_hi = max(by_degree) if by_degree else -1
        self.monos: dict[int, list] = {}
        self.index: dict[int, dict] = {}
        for d in range(self.d_lo, self.d_hi + 1):
            ms = sorted(by_degree.get(d, []), key=lambda m: m.render())
            self.monos[d] = ms
            self.index[d] = {m: i for i, m in enumerate(ms)}
        # stages[s-1] = (Z, B) row-space data of page s, keyed by degree
        full = {
            d: np.eye(len(self.monos[d]), dtype=np.int64) for d in self.monos
        }
        empty = {
            d: np.zeros((0, len(self.monos[d])), dtype=np.int64) for d in self.monos
        }
        self.stages: list[tuple[dict, dict]] = [(full, empty)]
        self._diff: dict[int, dict[int, np.ndarray]] = {}

    def dim_at(self, d: int) -> int:
        return len(self.monos.get(d, []))

    def matrices(self, page: int) -> dict[int, np.ndarray]:
        """Derivation matrices of the page-`page` scheduled map, by source degree."""
        if page in self._diff:
            return self._diff[page]
        sched = self.model.scheduled(page)
        p = self.p
        mats: dict[int, np.ndarray] = {}
        derive = (
            _derive_commutative if self.model.kind == "commutative" else _derive_word
        )
        for d in range(self.d_lo, self.d_hi + 1):
            n_src = self.dim_at(d)
            n_dst = self.dim_at(d - 1)
            mat = np.zeros((n_dst, n_src), dtype=np.int64)
            if sched is not None and n_src:
                for col, m in enumerate(self.monos[d]):
                    for img, c in derive(sched.values, m, p).items():
                        row = self.index.get(d - 1, {}).get(img)
                        if row is None:
                            raise DifferentialError(
                                f"derivation image {img.render()} missing from the "
                                f"weight-{self.weight} slice"
                            )
                        mat[row, col] = c
            mats[d] = mat
        if sched is not None:
            for d in range(self.d_lo + 1, self.d_hi + 1):
                if np.any((mats[d - 1] @ mats[d]) % p):
                    raise DifferentialError(
                        f"page-{page} derivation does not square to zero at degree {d}, "
                        f"weight {self.weight}"
                    )
        self._diff[page] = mats
        return mats

    def ensure_page(self, page: int) -> None:
        p = self.p
        while len(self.stages) < page:
            s = len(self.stages)  # advancing from page s to s+1
            Z, B = self.stages[-1]
            mats = self.matrices(s)
            newZ: dict[int, np.ndarray] = {}
            newB: dict[int, np.ndarray] = {}
            for d in range(self.d_lo, self.d_hi + 1):
                Zd, Bd = Z[d], B[d]
                img = (Zd @ mats[d].T) % p if Zd.size else np.zeros(
                    (Zd.shape[0], self.dim_at(d - 1)), dtype=np.int64
                )
                prevZ = Z.get(d - 1, np.zeros((0, 0), dtype=np.int64))
                prevB = B.get(d - 1, np.zeros((0, 0), dtype=np.int64))
                if d - 1 >= self.d_lo:
                    if not linalg.span_contains(prevZ, img, p):
                        raise DifferentialError(
                            f"page-{s} derivation leaves the page cycles at degree {d}, "
                            f"weight {self.weight}"
                        )
                    bimg = (Bd @ mats[d].T) % p
                    if not linalg.span_contains(prevB, bimg, p):
                        raise DifferentialError(
                            f"page-{s} derivation is ill-defined on the page at degree "
                            f"{d}, weight {self.weight}"
                        )
                reduced = np.array(
                    [linalg.reduce_vector(prevB, row, p) for row in img]
                ).reshape(img.shape)
                combos = linalg.nullspace(reduced.T, p)
                newZ[d] = linalg.row_basis((combos @ Zd) % p, p)
                up = mats.get(d + 1)
                if up is not None and d + 1 in Z and Z[d + 1].size:
                    bnd = (Z[d + 1] @ up.T) % p
                    newB[d] = linalg.span_sum(Bd, bnd, p)
                else:
                    newB[d] = linalg.row_basis(Bd, p)
            self.stages.append((newZ, newB))

    def page_data(self, page: int, d: int):
        """(dim, representative rows) of page `page` at degree d."""
        self.ensure_page(page)
        Z, B = self.stages[page - 1]
        Zd = Z.get(d)
        if Zd is None:
            return 0, np.zeros((0, 0), dtype=np.int64)
        Bd = B[d]
        reduced = [linalg.reduce_vector(Bd, z, self.p) for z in Zd]
        reduced = [z for z in reduced if np.any(z)]
        if not reduced:
            return 0, np.zeros((0, self.dim_at(d)), dtype=np.int64)
        reps = linalg.row_basis(np.vstack(reduced), self.p)
        return reps.shape[0], reps

    def render_vector(self, d: int, vec: np.ndarray) -> str:
        comb = LinComb(
            self.p,
            [(m, int(c)) for m, c in zip(self.monos[d], vec) if c % self.p],
        )
        return comb.render()


def _commutative_monomials(model: StagedModel, weight: int) -> list[Monomial]:
    gens = model.generators
    odd_cap = model.coeffs.odd
    out: list[Monomial] = []

    def extend(i: int, factors: list, wt: int) -> None:
        if wt == 0:
            out.append(monomial(tuple(factors)))
            return
        if i >= len(gens):
            return
        g = gens[i]
        cap = wt // g.weight
        if odd_cap and g.parity == 1:
            cap = min(cap, 1)
        for e in range(cap, -1, -1):
            if e:
                factors.append((g, e))
                extend(i + 1, factors, wt - e * g.weight)
                factors.pop()
            else:
                extend(i + 1, factors, wt)

    extend(0, [], weight)
    return out


def _word_monomials(model: StagedModel, weight: int) -> list[WordMono]:
    gens = model.generators
    out: list[WordMono] = []

    def extend(letters: list, wt: int) -> None:
        if wt == 0:
            out.append(word(tuple(letters)))
            return
        for g in gens:
            if g.weight <= wt:
                letters.append(g)
                extend(letters, wt - g.weight)
                letters.pop()

    extend([], weight)
    return out


def _slice(model: StagedModel, weight: int) -> _WeightSlice:
    if weight not in model._cache:
        model._cache[weight] = _WeightSlice(model, weight)
    return model._cache[weight]


def _required_weights(model: StagedModel, degree_hi: int, weights) -> list[int]:
    if weights is not None:
        ws = sorted(set(weights))
    else:
        ws = []
        w = 1
        while w <= model.max_weight and model.min_slice_degree(w) <= degree_hi:
            ws.append(w)
            w += 1
        w_next = w
        if w_next <= 10**6 and model.min_slice_degree(w_next) <= degree_hi:
            raise RangeIncompleteError(
                f"degrees through {degree_hi} need weight {w_next}, model stops at "
                f"weight {model.max_weight}"
            )
    for w in ws:
        if not model.eligible_weight(w):
            cap = model.table_cap if model.table_cap is not None else model.max_degree
            raise RangeIncompleteError(
                f"weight-{w} slice needs generators through degree "
                f"{model.slice_degree_bound(w)} and weight {w}; the model table "
                f"stops at degree {cap}, weight {model.max_weight}"
            )
    return ws


# ---------------------------------------------------------------------------
# Public API


@dataclass(frozen=True)
class PageSlice:
    degree: int
    weight: int
    dim: int
    basis: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    killed_by: int | None = None


@dataclass(frozen=True)
class Page:
    page: int
    label: str
    slices: tuple[PageSlice, ...]

    def dims(self) -> dict[tuple[int, int], int]:
        return {(s.degree, s.weight): s.dim for s in self.slices}

    def to_json(self) -> dict:
        out = []
        for s in self.slices:
            entry = {
                "degree": s.degree,
                "weight": s.weight,
                "dim": s.dim,
                "basis": list(s.basis),
            }
            if s.killed_by is not None:
                entry["killed_by"] = s.killed_by
            out.append(entry)
        return {"page": self.page, "slices": out}


def compute_page(
    model: StagedModel,
    page: int,
    degree_lo: int = 0,
    degree_hi: int | None = None,
    weights=None,
) -> Page:
    """Page `page` over the degree window, slice by weight.

    Weight slices are computed in full (they are finite), so boundaries
    from degrees above the window are always accounted for.
    """
    if page < 1:
        raise ValueError(f"page must be >= 1, got {page}")
    if degree_hi is None:
        degree_hi = model.max_degree
    if degree_lo < 0 or degree_hi < degree_lo:
        raise ValueError(f"bad degree window [{degree_lo}, {degree_hi}]")
    slices: list[PageSlice] = []
    for w in _required_weights(model, degree_hi, weights):
        ws = _slice(model, w)
        ws.ensure_page(page)
        sched = model.scheduled(page)
        mats = ws.matrices(page) if sched is not None else None
        for d in range(max(degree_lo, ws.d_lo), min(degree_hi, ws.d_hi) + 1):
            if ws.dim_at(d) == 0:
                continue
            dim, reps = ws.page_data(page, d)
            killed_by = None
            if dim == 0:
                for back in range(page - 1, 0, -1):
                    if ws.page_data(back, d)[0] > 0:
                        killed_by = back
                        break
            dim_prev, reps_prev = ws.page_data(page, d - 1)
            matrix = np.zeros((dim_prev, dim), dtype=np.int64)
            if mats is not None and dim and dim_prev:
                _, Bprev = ws.stages[page - 1]
                cols = np.vstack([reps_prev, Bprev[d - 1]]).T
                for j, z in enumerate(reps):
                    img = (mats[d] @ z) % ws.p
                    sol = linalg.solve(cols, img, ws.p)
                    if sol is None:
                        raise DifferentialError(
                            f"page-{page} image escapes the page at degree {d}, "
                            f"weight {w}"
                        )
                    matrix[:, j] = sol[:dim_prev]
            slices.append(
                PageSlice(
                    d,
                    w,
                    dim,
                    tuple(ws.render_vector(d, z) for z in reps),
                    tuple(tuple(int(x) for x in row) for row in matrix),
                    killed_by,
                )
            )
    slices.sort(key=lambda s: (s.degree, s.weight))
    return Page(page, model.label, tuple(slices))


@dataclass(frozen=True)
class SurvivorReport:
    class_render: str
    target_page: int
    nonzero: bool
    page_reached: int
    obstruction: str | None

    def to_json(self) -> dict:
        return {
            "class": self.class_render,
            "target_page": self.target_page,
            "nonzero": self.nonzero,
            "page_reached": self.page_reached,
            "obstruction": self.obstruction,
        }


def survivor_check(model: StagedModel, cls, target_page: int) -> SurvivorReport:
    """Track one homogeneous class through pages 1..target_page.

    The class must be a cycle for every scheduled differential below the
    target page and must not become a boundary at any of them.
    """
    if target_page < 2:
        raise ValueError(f"target_page must be >= 2, got {target_page}")
    p = model.coeffs.p
    items = []
    for key, c in cls.coeffs.items():
        if isinstance(key, Term):
            key = monomial(((key, 1),))
        items.append((key, c))
    if not items:
        raise ValueError("cannot track the zero class")
    degrees = {m.degree for m, _ in items}
    weights = {m.weight for m, _ in items}
    if len(degrees) != 1 or len(weights) != 1:
        raise ValueError("class must be homogeneous in degree and weight")
    d, w = degrees.pop(), weights.pop()
    if not model.eligible_weight(w):
        raise RangeIncompleteError(
            f"weight-{w} slice is outside the model cutoffs"
        )
    ws = _slice(model, w)
    ws.ensure_page(target_page)
    vec = np.zeros(ws.dim_at(d), dtype=np.int64)
    for m, c in items:
        pos = ws.index.get(d, {}).get(m)
        if pos is None:
            raise ValueError(f"{m.render()} is not a monomial of the slice")
        vec[pos] = c % p
    render = ws.render_vector(d, vec)
    for s in range(1, target_page):
        Z, B = ws.stages[s - 1]
        mats = ws.matrices(s)
        img = (mats[d] @ vec) % p
        prevB = B.get(d - 1)
        if np.any(img) and (prevB is None or not linalg.in_span(prevB, img, p)):
            return SurvivorReport(
                render,
                target_page,
                False,
                s + 1,
                f"not a cycle at page {s}: image is "
                f"{ws.render_vector(d - 1, img)}",
            )
        nextB = ws.stages[s][1][d]
        if linalg.in_span(nextB, vec, p):
            upZ = Z.get(d + 1)
            pre_render = "?"
            if upZ is not None and upZ.size:
                imgs = (upZ @ mats[d + 1].T) % p
                cols = np.vstack([imgs, B[d]]).T
                sol = linalg.solve(cols, vec, p)
                if sol is not None:
                    pre = (sol[: imgs.shape[0]] @ upZ) % p
                    pre_render = ws.render_vector(d + 1, pre)
            return SurvivorReport(
                render,
                target_page,
                False,
                s + 1,
                f"boundary of {pre_render} under the page-{s} differential",
            )
    return SurvivorReport(render, target_page, True, target_page, None)


def check_acyclic(
    model: StagedModel, page: int, degree_lo: int, degree_hi: int
) -> bool:
    """True iff page `page`+1 vanishes in all positive degrees of the window."""
    result = compute_page(model, page + 1, max(degree_lo, 1), degree_hi)
    return all(s.dim == 0 for s in result.slices)


@dataclass(frozen=True)
class PresentationReport:
    ok: bool
    page: int
    expected: dict[int, int]
    actual: dict[int, int]

    @property
    def mismatches(self) -> dict[int, tuple[int, int]]:
        return {
            d: (self.actual.get(d, 0), self.expected.get(d, 0))
            for d in sorted(set(self.expected) | set(self.actual))
            if self.actual.get(d, 0) != self.expected.get(d, 0)
        }


def verify_presented_page(
    model: StagedModel,
    page: int,
    claimed,
    degree_lo: int,
    degree_hi: int,
    presentation: str | None = None,
) -> PresentationReport:
    """Compare page dimensions against a claimed free presentation.

    claimed lists (degree, odd) generator data; presentation defaults to
    the model's own kind.  Commutative claims count exterior/polynomial
    monomials, associative claims count words.
    """
    if degree_lo < 1:
        raise ValueError("degree_lo must be >= 1 (degree 0 is the unit)")
    presentation = presentation or model.kind
    gens = []
    for item in claimed:
        if isinstance(item, tuple):
            gens.append((int(item[0]), bool(item[1])))
        else:
            gens.append((item.degree, bool(item.parity)))
    series = [0] * (degree_hi + 1)
    series[0] = 1
    if presentation == "commutative":
        for deg, odd in gens:
            if odd and model.coeffs.odd:
                nxt = series[:]
                for i in range(deg, degree_hi + 1):
                    nxt[i] += series[i - deg]
                series = nxt
            else:
                for i in range(deg, degree_hi + 1):
                    series[i] += series[i - deg]
    elif presentation == "associative":
        for i in range(1, degree_hi + 1):
            series[i] = sum(series[i - deg] for deg, _ in gens if deg <= i)
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    result = compute_page(model, page, degree_lo, degree_hi)
    actual: dict[int, int] = {}
    for s in result.slices:
        actual[s.degree] = actual.get(s.degree, 0) + s.dim
    expected = {
        d: series[d] for d in range(degree_lo, degree_hi + 1) if series[d]
    }
    actual = {d: k for d, k in sorted(actual.items()) if k}
    return PresentationReport(actual == expected, page, expected, actual)
