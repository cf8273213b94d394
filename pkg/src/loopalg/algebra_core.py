"""Exact building blocks for the homology of a double loop space on two cells.

Everything is graded by the homological ("loop") degree of the double loop
space.  The free Lie algebra that indexes the generators lives one suspension
up, where the two alphabet letters have degrees 2n-1 and 2n; a term of loop
degree d sits in suspended degree d+1.  All bracket identities (antisymmetry,
Jacobi, vanishing squares) are delegated to the embedding of brackets as
graded commutators in the tensor algebra on the two letters, which fixes
every sign once and for all.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import CutoffError, DifferentialError, OracleMismatchError

LIE_SHAPES = ("u", "v", "bracket")


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Coefficients:
    """Ground data: homology mod p of a mod-p^r Moore space cofibre."""

    p: int
    r: int

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")

    @property
    def odd(self) -> bool:
        return self.p != 2

    def inv(self, a: int) -> int:
        return linalg.inv_scalar(a, self.p)


@dataclass(frozen=True)
class Term:
    """One generator-shaped expression: u, v, L[x,y], Q1^k[x] or bQ1^k[x].

    degree/weight are precomputed at construction; parity is degree mod 2.
    Bracket terms carry both arguments, operation terms carry the argument
    in `left` and the iteration count in `k`.
    """

    shape: str
    degree: int
    weight: int
    k: int = 0
    left: "Term | None" = None
    right: "Term | None" = None

    @property
    def parity(self) -> int:
        return self.degree % 2

    def render(self) -> str:
        if self.shape == "u":
            return "u"
        if self.shape == "v":
            return "v"
        if self.shape == "bracket":
            return f"L[{self.left.render()},{self.right.render()}]"
        if self.shape == "q":
            return f"Q1^{self.k}[{self.left.render()}]"
        return f"bQ1^{self.k}[{self.left.render()}]"

    def sort_key(self) -> tuple[int, int, str]:
        return (self.degree, self.weight, self.render())

    def is_lie(self) -> bool:
        return self.shape in LIE_SHAPES


def gen_u(n: int) -> Term:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return Term("u", 2 * n - 2, 1)


def gen_v(n: int) -> Term:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return Term("v", 2 * n - 1, 1)


def bracket(x: Term, y: Term) -> Term:
    """Browder-style bracket; raises the degree of the pair by one."""
    if not (x.is_lie() and y.is_lie()):
        raise ValueError("bracket arguments must be bracket expressions over u, v")
    return Term("bracket", x.degree + y.degree + 1, x.weight + y.weight, 0, x, y)


def q_op(coeffs: Coefficients, k: int, x: Term) -> Term:
    """k-fold first Dyer-Lashof operation on a generator of odd degree.

    For odd p the argument must have odd loop degree (it desuspends an
    even generator one level up); for p = 2 any generator is allowed.
    """
    if k < 1:
        raise ValueError(f"operation exponent k must be >= 1, got {k}")
    if not x.is_lie():
        raise ValueError("operation argument must be a bracket expression")
    if coeffs.odd and x.degree % 2 == 0:
        raise ValueError("for odd p the operation argument must have odd degree")
    p = coeffs.p
    return Term("q", p**k * (x.degree + 1) - 1, p**k * x.weight, k, x)


def beta_q(coeffs: Coefficients, k: int, x: Term) -> Term:
    """Bockstein companion of q_op; only present for odd p."""
    if not coeffs.odd:
        raise ValueError("p = 2 has no separate Bockstein generators")
    q = q_op(coeffs, k, x)
    return Term("bq", q.degree - 1, q.weight, k, x)


class LinComb:
    """Finite F_p-linear combination keyed by graded basis objects.

    Keys must be hashable and expose degree, weight and render(); that
    covers terms, monomials and words alike.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, items=()) -> None:
        self.p = p
        acc: dict = {}
        src = items.items() if isinstance(items, dict) else items
        for key, c in src:
            c = (acc.get(key, 0) + c) % p
            if c:
                acc[key] = c
            elif key in acc:
                del acc[key]
        self.coeffs = acc

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinComb)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self.coeffs.items())))

    def add(self, other: "LinComb") -> "LinComb":
        if self.p != other.p:
            raise ValueError("mixed characteristics")
        merged = list(self.coeffs.items()) + list(other.coeffs.items())
        return LinComb(self.p, merged)

    def scaled(self, c: int) -> "LinComb":
        return LinComb(self.p, [(k, v * c) for k, v in self.coeffs.items()])

    def items_sorted(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: _sort_key(kv[0]))

    def single(self):
        """The (key, coeff) pair if supported on one key, else None."""
        if len(self.coeffs) != 1:
            return None
        return next(iter(self.coeffs.items()))

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key, c in self.items_sorted():
            parts.append(key.render() if c == 1 else f"{c}*{key.render()}")
        return " + ".join(parts)

    def __repr__(self) -> str:  # pragma: no cover
        return f"LinComb(p={self.p}, {self.render()})"


def _sort_key(obj) -> tuple[int, int, str]:
    return (obj.degree, obj.weight, obj.render())


# ---------------------------------------------------------------------------
# Lyndon words and the bracket basis


def lyndon_words(max_len: int) -> list[str]:
    """All Lyndon words over the ordered alphabet u < v, lengths <= max_len."""
    words: list[str] = []
    w = [0]
    while w:
        words.append("".join("uv"[c] for c in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) % m])
        while w and w[-1] == 1:
            w.pop()
        if w:
            w[-1] += 1
    return sorted(words, key=lambda s: (len(s), s))


def _smallest_proper_suffix(word: str) -> int:
    """Split position of the standard factorization of a Lyndon word."""
    best = 1
    for i in range(1, len(word)):
        if word[i:] < word[best:]:
            best = i
    return best


def _word_term(word: str, n: int) -> Term:
    """Bracketing of a Lyndon word.

    Words u v^m are bracketed v-outermost so the emitted names agree with
    the iterated-bracket classes they straighten to; every other word uses
    the standard factorization.
    """
    if len(word) == 1:
        return gen_u(n) if word == "u" else gen_v(n)
    if len(word) >= 3 and word[0] == "u" and set(word[1:]) == {"v"}:
        return bracket(gen_v(n), _word_term(word[:-1], n))
    cut = _smallest_proper_suffix(word)
    return bracket(_word_term(word[:cut], n), _word_term(word[cut:], n))


@dataclass(frozen=True)
class LieBasis:
    """Bracket basis of the free graded Lie algebra on u, v up to a degree."""

    coeffs: Coefficients
    n: int
    max_degree: int
    elements: tuple[Term, ...]

    def slice(self, degree: int, weight: int) -> list[Term]:
        return [t for t in self.elements if t.degree == degree and t.weight == weight]


def lyndon_basis(coeffs: Coefficients, n: int, max_degree: int) -> LieBasis:
    """Bracket basis in loop degrees <= max_degree.

    Lyndon words are bracketed via _word_term; additionally every basic
    element of even loop degree (odd degree one suspension up) contributes
    its self-bracket.  For p = 2 the self-brackets vanish and are omitted.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if max_degree < 2 * n - 2:
        raise ValueError(
            f"max_degree {max_degree} is below the bottom generator degree {2 * n - 2}"
        )
    max_len = (max_degree + 1) // (2 * n - 1)
    elements: list[Term] = []
    for word in lyndon_words(max(1, max_len)):
        term = _word_term(word, n)
        if term.degree <= max_degree:
            elements.append(term)
    if coeffs.odd:
        for term in list(elements):
            if term.degree % 2 == 0 and 2 * term.degree + 1 <= max_degree:
                elements.append(bracket(term, term))
    elements.sort(key=Term.sort_key)
    return LieBasis(coeffs, n, max_degree, tuple(elements))


def ad_v(n: int, m: int) -> Term:
    """Iterated bracket L[v,L[v,...,L[v,u]]] with m copies of v."""
    term = gen_u(n)
    for _ in range(m):
        term = bracket(gen_v(n), term)
    return term


# ---------------------------------------------------------------------------
# Tensor-algebra straightening

Word = tuple[str, ...]

_LETTER_DEG = {"u": -1, "v": 0}  # suspended degree minus 2n


def _suspended_letter_degree(letter: str, n: int) -> int:
    return 2 * n + _LETTER_DEG[letter]


def _word_mul(a: dict[Word, int], b: dict[Word, int], p: int) -> dict[Word, int]:
    out: dict[Word, int] = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            c = (out.get(w, 0) + ca * cb) % p
            if c:
                out[w] = c
            elif w in out:
                del out[w]
    return out


@lru_cache(maxsize=None)
def _embedding(term: Term, p: int) -> tuple[tuple[Word, int], ...]:
    if term.shape == "u":
        return ((("u",), 1),)
    if term.shape == "v":
        return ((("v",), 1),)
    if term.shape != "bracket":
        raise ValueError("only bracket expressions embed in the tensor algebra")
    ex = dict(_embedding(term.left, p))
    ey = dict(_embedding(term.right, p))
    sign = (-1) ** ((term.left.degree + 1) * (term.right.degree + 1))
    out = _word_mul(ex, ey, p)
    for w, c in _word_mul(ey, ex, p).items():
        c = (out.get(w, 0) - sign * c) % p
        if c:
            out[w] = c
        elif w in out:
            del out[w]
    return tuple(sorted(out.items()))


def tensor_embedding(expr, p: int) -> dict[Word, int]:
    """Expand a bracket expression (or combination) as graded commutators.

    Words are tuples over {u, v} one suspension up; signs come from the
    graded commutator [x, y] = xy - (-1)^{|x||y|} yx in suspended degrees.
    """
    if isinstance(expr, Term):
        expr = LinComb(p, [(expr, 1)])
    out: dict[Word, int] = {}
    for term, c in expr.coeffs.items():
        for w, cw in _embedding(term, p):
            cc = (out.get(w, 0) + c * cw) % p
            if cc:
                out[w] = cc
            elif w in out:
                del out[w]
    return out


@lru_cache(maxsize=None)
def _slice_basis_embedded(p: int, r: int, n: int, degree: int, weight: int):
    """Basis terms at (degree, weight) and their embedding matrix columns."""
    coeffs = Coefficients(p, r)
    basis = lyndon_basis(coeffs, n, max(degree, 2 * n - 2)).slice(degree, weight)
    words: set[Word] = set()
    columns = []
    for term in basis:
        col = dict(_embedding(term, p))
        columns.append(col)
        words.update(col)
    word_list = sorted(words)
    index = {w: i for i, w in enumerate(word_list)}
    mat = np.zeros((len(word_list), len(basis)), dtype=np.int64)
    for j, col in enumerate(columns):
        for w, c in col.items():
            mat[index[w], j] = c
    return basis, word_list, index, mat


def lie_normal_form(expr, coeffs: Coefficients, n: int) -> LinComb:
    """Expansion of a bracket expression in the Lyndon bracket basis.

    The coefficients are solved exactly against the tensor-algebra
    embedding, so antisymmetry, Jacobi and vanishing squares need no
    rewrite rules of their own.
    """
    p = coeffs.p
    if isinstance(expr, Term):
        expr = LinComb(p, [(expr, 1)])
    for term in expr.coeffs:
        if not term.is_lie():
            raise ValueError(f"{term.render()} is not a bracket expression")
    slices: dict[tuple[int, int], LinComb] = {}
    for term, c in expr.coeffs.items():
        key = (term.degree, term.weight)
        piece = LinComb(p, [(term, c)])
        slices[key] = slices[key].add(piece) if key in slices else piece
    result = LinComb(p)
    for (degree, weight), piece in sorted(slices.items()):
        target = tensor_embedding(piece, p)
        basis, word_list, index, mat = _slice_basis_embedded(p, coeffs.r, n, degree, weight)
        if not target:
            continue
        vec = np.zeros(len(word_list), dtype=np.int64)
        for w, c in target.items():
            if w not in index:
                raise OracleMismatchError(
                    f"expression leaves the bracket span in degree {degree}"
                )
            vec[index[w]] = c
        sol = linalg.solve(mat, vec, p)
        if sol is None:
            raise OracleMismatchError(
                f"expression is not a combination of basis brackets in degree {degree}"
            )
        result = result.add(LinComb(p, list(zip(basis, (int(c) for c in sol)))))
    return result


# ---------------------------------------------------------------------------
# Primitive-dimension oracle


def _words_of_suspended_degree(n: int, degree: int) -> list[Word]:
    out: list[Word] = []

    def extend(prefix: tuple[str, ...], remaining: int) -> None:
        if remaining == 0:
            out.append(prefix)
            return
        for letter in ("u", "v"):
            d = _suspended_letter_degree(letter, n)
            if d <= remaining:
                extend(prefix + (letter,), remaining - d)

    extend((), degree)
    return sorted(out)


def primitive_dims_oracle(
    coeffs: Coefficients,
    n: int,
    max_degree: int,
    max_words_per_degree: int = 20000,
) -> dict[int, int]:
    """Dimensions of the primitives of the tensor algebra on the two letters.

    Degrees are suspended degrees (letters sit in 2n-1 and 2n).  Computed
    as the kernel of the reduced coproduct, independently of any bracket
    bookkeeping, so it can referee the Lyndon basis.
    """
    p = coeffs.p
    dims: dict[int, int] = {}
    for degree in range(1, max_degree + 1):
        words = _words_of_suspended_degree(n, degree)
        if len(words) > max_words_per_degree:
            raise CutoffError(
                f"{len(words)} words in degree {degree} exceed the configured "
                f"bound {max_words_per_degree}"
            )
        if not words:
            dims[degree] = 0
            continue
        pair_index: dict[tuple[Word, Word], int] = {}
        entries: list[tuple[int, int, int]] = []
        for col, word in enumerate(words):
            splits: dict[tuple[Word, Word], int] = {((), ()): 1}
            for letter in word:
                ld = _suspended_letter_degree(letter, n)
                nxt: dict[tuple[Word, Word], int] = {}
                for (lw, rw), c in splits.items():
                    rdeg = sum(_suspended_letter_degree(x, n) for x in rw)
                    cl = (c * (-1) ** (rdeg * ld)) % p
                    key = (lw + (letter,), rw)
                    nxt[key] = (nxt.get(key, 0) + cl) % p
                    key = (lw, rw + (letter,))
                    nxt[key] = (nxt.get(key, 0) + c) % p
                splits = nxt
            for (lw, rw), c in splits.items():
                if not lw or not rw or c % p == 0:
                    continue
                if (lw, rw) not in pair_index:
                    pair_index[(lw, rw)] = len(pair_index)
                entries.append((pair_index[(lw, rw)], col, c % p))
        mat = np.zeros((max(1, len(pair_index)), len(words)), dtype=np.int64)
        for row, col, c in entries:
            mat[row, col] = c
        dims[degree] = len(words) - linalg.rank(mat, p)
    return dims


def basis_primitive_counts(
    coeffs: Coefficients, n: int, max_degree: int
) -> dict[int, int]:
    """Primitive dimensions predicted by the bracket basis, per suspended degree.

    One suspension up the primitives are the free-Lie basis elements plus
    the p^k-th powers of the even-degree ones; each bracket-basis element
    of loop degree d contributes in suspended degree d + 1.  Compare with
    primitive_dims_oracle degree by degree.
    """
    basis = lyndon_basis(coeffs, n, max_degree).elements
    counts = {d: 0 for d in range(1, max_degree + 1)}
    for t in basis:
        susp = t.degree + 1
        if susp <= max_degree:
            counts[susp] += 1
        if susp % 2 == 0:
            power = susp * coeffs.p
            while power <= max_degree:
                counts[power] += 1
                power *= coeffs.p
    return counts


# ---------------------------------------------------------------------------
# Homology of one graded spot


def fp_homology(
    d_in: np.ndarray, d_out: np.ndarray, p: int
) -> tuple[int, np.ndarray]:
    """Homology at the middle of C_{d+1} --d_in--> C_d --d_out--> C_{d-1}.

    Returns (dimension, representative rows).  Representatives are cycle
    vectors reduced against the image, echelonized, so they are canonical
    for the given coordinate order.
    """
    d_in = linalg.as_mod(np.atleast_2d(d_in), p)
    d_out = linalg.as_mod(np.atleast_2d(d_out), p)
    dim_mid = d_in.shape[0]
    if d_out.shape[1] != dim_mid:
        raise ValueError(
            f"shape mismatch: d_in lands in dim {dim_mid}, d_out consumes {d_out.shape[1]}"
        )
    if d_in.size and d_out.size and np.any((d_out @ d_in) % p):
        raise DifferentialError("d_out @ d_in != 0: broken differential upstream")
    cycles = linalg.nullspace(d_out, p)
    boundaries = linalg.row_basis(d_in.T, p)
    reduced = [linalg.reduce_vector(boundaries, z, p) for z in cycles]
    reduced = [z for z in reduced if np.any(z)]
    if not reduced:
        return 0, np.zeros((0, dim_mid), dtype=np.int64)
    reps = linalg.row_basis(np.vstack(reduced), p)
    return reps.shape[0], reps
