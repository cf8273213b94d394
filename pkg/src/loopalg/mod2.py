"""Mod-2 analysis of the six quadratic classes.

The weight-2 part of the double-loop homology at p = 2 is six-dimensional:
u^2, Q1[u], uv, L[u,v], v^2, Q1[v].  This module builds the Steenrod and
higher-Bockstein action on that space, searches exhaustively for
direct-sum decompositions stable under all the operations, and verifies
the integral chain identity that produces the top Bockstein.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import linalg
from .algebra_core import Coefficients
from .errors import DifferentialError, EngineError, OracleMismatchError
from .freecomm import Monomial, generator_table, monomial_basis

_RENDERS = ("u^2", "Q1^1[u]^1", "u^1*v^1", "L[u,v]^1", "v^2", "Q1^1[v]^1")


@dataclass(frozen=True)
class SteenrodModule:
    """The six classes with Sq^1, Sq^2 and the staged Bockstein pattern.

    Matrices act on coordinate columns (entry [i, j] is the coefficient of
    class i in the image of class j); bocksteins lists (page, matrix)
    pairs in page order.
    """

    r: int
    n: int
    classes: tuple[Monomial, ...]
    sq1: np.ndarray
    sq2: np.ndarray
    bocksteins: tuple[tuple[int, np.ndarray], ...]

    def index(self, render: str) -> int:
        for i, c in enumerate(self.classes):
            if c.render() == render:
                return i
        raise KeyError(render)

    def render_vector(self, vec: np.ndarray) -> str:
        parts = [
            self.classes[i].render() for i in range(len(self.classes)) if vec[i] % 2
        ]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "classes": [
                {"render": c.render(), "degree": c.degree} for c in self.classes
            ],
            "sq1": self.sq1.tolist(),
            "sq2": self.sq2.tolist(),
            "bocksteins": [
                {"page": page, "matrix": mat.tolist()}
                for page, mat in self.bocksteins
            ],
        }


def _column_matrix(images: dict[int, list[int]], dim: int) -> np.ndarray:
    mat = np.zeros((dim, dim), dtype=np.int64)
    for j, rows in images.items():
        for i in rows:
            mat[i, j] = 1
    return mat


def _degree_homogeneous(mat: np.ndarray, degrees: list[int], drop: int) -> bool:
    rows, cols = np.nonzero(mat)
    return all(degrees[i] == degrees[j] - drop for i, j in zip(rows, cols))


def _staged_all_dead(module: SteenrodModule) -> None:
    """Run the Bockstein pairings page by page; all six classes must die.

    Each nonzero column of a page matrix is one pairing: the class of the
    source basis element maps to the class of the target vector, and the
    pairing removes exactly those two dimensions from the page.  Every
    pairing must fire on classes still alive when its page is reached,
    and after page r + 1 nothing may remain, matching integral homology
    that is all torsion of order at most 2^(r+1).
    """
    dim = len(module.classes)
    by_page = dict(module.bocksteins)
    dead = np.zeros((0, dim), dtype=np.int64)
    for page in range(1, module.r + 2):
        mat = by_page.get(page)
        if mat is None:
            continue
        for j in range(dim):
            tgt = mat[:, j] % 2
            if not tgt.any():
                continue
            src = np.zeros(dim, dtype=np.int64)
            src[j] = 1
            if not linalg.reduce_vector(dead, src, 2).any():
                raise OracleMismatchError(
                    f"page-{page} pairing fires on {module.classes[j].render()}, "
                    "which is already dead"
                )
            if not linalg.reduce_vector(dead, tgt, 2).any():
                raise OracleMismatchError(
                    f"page-{page} pairing targets {module.render_vector(tgt)}, "
                    "which is already dead"
                )
            grown = linalg.span_sum(dead, np.vstack([src, tgt]), 2)
            if grown.shape[0] != dead.shape[0] + 2:
                raise OracleMismatchError(
                    f"page-{page} pairing on {module.classes[j].render()} does "
                    "not remove two independent classes"
                )
            dead = grown
    if dead.shape[0] != dim:
        alive = [
            module.render_vector(v)
            for v in np.eye(dim, dtype=np.int64)
            if linalg.reduce_vector(dead, v, 2).any()
        ]
        raise OracleMismatchError(
            "classes survive past the last Bockstein page: " + ", ".join(alive)
        )


def build_d2_module(r: int, n: int) -> SteenrodModule:
    """The Steenrod/Bockstein module on the six quadratic classes.

    Sq^1 and Sq^2 columns on the products follow the Cartan formula from
    Sq^1 v = u (r = 1 only); the operation classes carry Sq^1 Q1[v] =
    v^2 + L[u,v] (r = 1) or v^2, and Sq^2 Q1[v] = Q1[Sq^1 v] by the
    Nishida relation.  The Bockstein pattern runs over pages 1, r, r + 1.
    Every stored matrix is cross-checked against those rules and against
    a staged run that must kill the whole space.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    coeffs = Coefficients(2, r)
    table = generator_table(coeffs, n, 4 * n - 1, 2)
    classes: list[Monomial] = []
    for d in range(4 * n - 4, 4 * n):
        classes.extend(monomial_basis(table, d, 2))
    classes.sort(key=lambda m: (m.degree, m.render()))
    if tuple(c.render() for c in classes) != _RENDERS:
        raise OracleMismatchError(
            "the weight-2 slice is not the expected six classes: "
            + ", ".join(c.render() for c in classes)
        )
    dim = len(classes)
    idx = {c.render(): i for i, c in enumerate(classes)}
    u2, q1u, uv, luv, v2, q1v = (idx[s] for s in _RENDERS)
    degrees = [c.degree for c in classes]

    sq1_images: dict[int, list[int]] = {q1v: [v2, luv] if r == 1 else [v2]}
    sq2_images: dict[int, list[int]] = {}
    if r == 1:
        sq1_images[uv] = [u2]
        sq2_images[q1v] = [q1u]
        sq2_images[v2] = [u2]
    sq1 = _column_matrix(sq1_images, dim)
    sq2 = _column_matrix(sq2_images, dim)

    if r == 1:
        bocksteins = (
            (1, sq1.copy()),
            (2, _column_matrix({luv: [q1u]}, dim)),
        )
    else:
        bocksteins = (
            (1, _column_matrix({q1v: [v2]}, dim)),
            (r, _column_matrix({uv: [u2]}, dim)),
            (r + 1, _column_matrix({luv: [q1u]}, dim)),
        )

    module = SteenrodModule(r, n, tuple(classes), sq1, sq2, bocksteins)

    if ((sq1 @ sq1) % 2).any():
        raise DifferentialError("Sq^1 Sq^1 is not zero")
    if not _degree_homogeneous(sq1, degrees, 1):
        raise DifferentialError("Sq^1 is not degree-lowering by 1")
    if not _degree_homogeneous(sq2, degrees, 2):
        raise DifferentialError("Sq^2 is not degree-lowering by 2")
    for page, mat in bocksteins:
        if not _degree_homogeneous(mat, degrees, 1):
            raise DifferentialError(f"page-{page} Bockstein is not degree-lowering by 1")
    if not np.array_equal(bocksteins[0][1], sq1):
        raise OracleMismatchError("the page-1 Bockstein must equal Sq^1")

    # Cartan on the products, from Sq^1 v = u (r = 1) / 0 and Sq^2 = 0 on
    # the letters: Sq^1(u^2) = 0, Sq^1(uv) = u.Sq^1(v), Sq^1(v^2) = 0,
    # Sq^2(u^2) = (Sq^1 u)^2 = 0, Sq^2(uv) = Sq^1(u).Sq^1(v) = 0,
    # Sq^2(v^2) = (Sq^1 v)^2.
    sq1_v_is_u = r == 1
    cartan_sq1 = {uv: [u2] if sq1_v_is_u else []}
    cartan_sq2 = {v2: [u2] if sq1_v_is_u else []}
    for j in (u2, uv, v2):
        want = np.zeros(dim, dtype=np.int64)
        for i in cartan_sq1.get(j, []):
            want[i] = 1
        if not np.array_equal(sq1[:, j], want):
            raise OracleMismatchError(
                f"Sq^1 on {classes[j].render()} breaks the Cartan formula"
            )
        want = np.zeros(dim, dtype=np.int64)
        for i in cartan_sq2.get(j, []):
            want[i] = 1
        if not np.array_equal(sq2[:, j], want):
            raise OracleMismatchError(
                f"Sq^2 on {classes[j].render()} breaks the Cartan formula"
            )
    # Bracket Cartan with L[u,u] = 0 and Sq on letters as above: both
    # Sq^1 L[u,v] = L[u, Sq^1 v] and Sq^2 L[u,v] = L[Sq^1 u, Sq^1 v] vanish.
    if sq1[:, luv].any() or sq2[:, luv].any():
        raise OracleMismatchError("Sq on L[u,v] breaks the bracket Cartan formula")
    # Nishida relation: Sq^2 Q1[v] = Q1[Sq^1 v].
    want = np.zeros(dim, dtype=np.int64)
    if sq1_v_is_u:
        want[q1u] = 1
    if not np.array_equal(sq2[:, q1v], want):
        raise OracleMismatchError("Sq^2 on Q1[v] breaks the Nishida relation")
    # Quadratic deviation: Sq^1 Q1[v] = v^2 + L[v, Sq^1 v].
    want = np.zeros(dim, dtype=np.int64)
    want[v2] = 1
    if sq1_v_is_u:
        want[luv] = 1
    if not np.array_equal(sq1[:, q1v], want):
        raise OracleMismatchError("Sq^1 on Q1[v] breaks the quadratic deviation rule")

    _staged_all_dead(module)
    return module


@dataclass(frozen=True)
class Decomposition:
    """Two complementary subspaces closed under every operation."""

    parts: tuple[tuple[str, ...], tuple[str, ...]]
    matrices: tuple[np.ndarray, np.ndarray]

    def isolates(self, renders: frozenset[str]) -> bool:
        """Whether one part is exactly the span of the named classes.

        Parts are stored as reduced bases, so the span of a set of basis
        classes renders as exactly those class names.
        """
        return any(set(part) == set(renders) for part in self.parts)

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts]}


def _subspace_pairs(dim: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """All ordered pairs (A, B) of subspaces of F_2^dim with A + B direct
    and equal to the whole slice."""
    vectors = [
        np.array([(mask >> i) & 1 for i in range(dim)], dtype=np.int64)
        for mask in range(1, 2**dim)
    ]
    spaces = [np.zeros((0, dim), dtype=np.int64)]
    seen = {spaces[0].tobytes()}
    for k in range(1, dim + 1):
        for combo in combinations(vectors, k):
            basis = linalg.row_basis(np.array(combo, dtype=np.int64), 2)
            if basis.shape[0] == k and basis.tobytes() not in seen:
                seen.add(basis.tobytes())
                spaces.append(basis)
    pairs = []
    for a in spaces:
        for b in spaces:
            if a.shape[0] + b.shape[0] == dim and linalg.rank(np.vstack([a, b]), 2) == dim:
                pairs.append((a, b))
    return pairs


def decomposition_search(module: SteenrodModule) -> list[Decomposition]:
    """Exhaustive search for direct-sum splittings stable under all operations.

    Degree homogeneity reduces the search to a choice of complementary
    pair inside each degree slice (each of dimension at most two), so the
    whole space of candidates is small enough to enumerate outright.
    Unordered duplicates are folded; trivial splittings are dropped.
    """
    dim = len(module.classes)
    by_degree: dict[int, list[int]] = {}
    for i, c in enumerate(module.classes):
        by_degree.setdefault(c.degree, []).append(i)
    slices = [by_degree[d] for d in sorted(by_degree)]

    per_slice: list[list[tuple[np.ndarray, np.ndarray]]] = []
    for cols in slices:
        local = _subspace_pairs(len(cols))
        lifted = []
        for a, b in local:
            la = np.zeros((a.shape[0], dim), dtype=np.int64)
            lb = np.zeros((b.shape[0], dim), dtype=np.int64)
            for row in range(a.shape[0]):
                for lj, j in enumerate(cols):
                    la[row, j] = a[row, lj]
            for row in range(b.shape[0]):
                for lj, j in enumerate(cols):
                    lb[row, j] = b[row, lj]
            lifted.append((la, lb))
        per_slice.append(lifted)

    ops = [module.sq1, module.sq2] + [mat for _, mat in module.bocksteins]

    def closed(space: np.ndarray) -> bool:
        if space.shape[0] == 0:
            return True
        rref = linalg.row_basis(space, 2)
        return all(
            linalg.span_contains(rref, (space @ op.T) % 2, 2) for op in ops
        )

    results: list[Decomposition] = []
    seen: set[frozenset[bytes]] = set()

    def assemble(i: int, a_rows: list[np.ndarray], b_rows: list[np.ndarray]) -> None:
        if i == len(per_slice):
            a = (
                np.vstack(a_rows)
                if a_rows
                else np.zeros((0, dim), dtype=np.int64)
            )
            b = (
                np.vstack(b_rows)
                if b_rows
                else np.zeros((0, dim), dtype=np.int64)
            )
            if a.shape[0] == 0 or b.shape[0] == 0:
                return
            if not (closed(a) and closed(b)):
                return
            a = linalg.row_basis(a, 2)
            b = linalg.row_basis(b, 2)
            key = frozenset((a.tobytes(), b.tobytes()))
            if key in seen:
                return
            seen.add(key)
            _reconstruction_check(module, a, b, ops)
            first, second = sorted(
                (a, b), key=lambda m: tuple(module.render_vector(v) for v in m)
            )
            results.append(
                Decomposition(
                    (
                        tuple(module.render_vector(v) for v in first),
                        tuple(module.render_vector(v) for v in second),
                    ),
                    (first, second),
                )
            )
            return
        for a_part, b_part in per_slice[i]:
            assemble(
                i + 1,
                a_rows + ([a_part] if a_part.shape[0] else []),
                b_rows + ([b_part] if b_part.shape[0] else []),
            )

    assemble(0, [], [])
    results.sort(key=lambda d: d.parts)
    return results


def _reconstruction_check(
    module: SteenrodModule,
    a: np.ndarray,
    b: np.ndarray,
    ops: list[np.ndarray],
) -> None:
    """Restricting every operation to the parts must rebuild the module."""
    dim = len(module.classes)
    basis = np.vstack([a, b]).T % 2  # columns: part bases in the new order
    cols = [linalg.solve(basis, np.eye(dim, dtype=np.int64)[:, j], 2) for j in range(dim)]
    if any(c is None for c in cols):
        raise EngineError("decomposition parts do not span the module")
    inv = np.array(cols, dtype=np.int64).T
    ka = a.shape[0]
    for op in ops:
        conj = (inv @ op @ basis) % 2
        if conj[ka:, :ka].any() or conj[:ka, ka:].any():
            raise EngineError("operation does not restrict to the parts")
        rebuilt = np.zeros((dim, dim), dtype=np.int64)
        rebuilt[:ka, :ka] = conj[:ka, :ka]
        rebuilt[ka:, ka:] = conj[ka:, ka:]
        if not np.array_equal((basis @ rebuilt @ inv) % 2, op % 2):
            raise EngineError("restricted operations do not rebuild the module")


# ---------------------------------------------------------------------------
# Integral chain identity


@dataclass(frozen=True)
class ChainReport:
    """Outcome of the equivariant chain computation.

    coefficient is the integer multiplier of e_1 (x) b (x) b in
    d((alpha + 1) e_1 (x) a (x) b); the identity asks for -2^(r+1).
    """

    r: int
    coefficient: int
    expected: int
    intermediate_zero: bool
    ok: bool

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "coefficient": self.coefficient,
            "expected": self.expected,
            "intermediate_zero": self.intermediate_zero,
            "ok": self.ok,
        }


_PARITY = {"a": 1, "b": 0}

_Key = tuple[int, str, str]  # (k, x, y) for e_k (x) x (x) y


def _add(out: dict[_Key, int], key: _Key, c: int) -> None:
    c += out.get(key, 0)
    if c:
        out[key] = c
    elif key in out:
        del out[key]


def _swap(key: _Key, c: int) -> tuple[_Key, int]:
    """alpha action: factor swap with the Koszul sign."""
    k, x, y = key
    sign = -1 if _PARITY[x] * _PARITY[y] % 2 else 1
    return (k, y, x), sign * c


def _tensor_diff(x: str, y: str, r: int) -> list[tuple[str, str, int]]:
    """d on x (x) y from d(a) = 2^r b, d(b) = 0, with the Koszul sign."""
    out = []
    if x == "a":
        out.append(("b", y, 2**r))
    if y == "a":
        sign = -1 if _PARITY[x] % 2 else 1
        out.append((x, "b", sign * 2**r))
    return out


def _diff(elem: dict[_Key, int], r: int) -> dict[_Key, int]:
    """d(e_k (x) x (x) y) = (alpha + (-1)^k) e_(k-1) (x) x (x) y
    + (-1)^k e_k (x) d(x (x) y); integer coefficients throughout."""
    out: dict[_Key, int] = {}
    for (k, x, y), c in elem.items():
        k_sign = -1 if k % 2 else 1
        if k >= 1:
            skey, sc = _swap((k - 1, x, y), c)
            _add(out, skey, sc)
            _add(out, (k - 1, x, y), k_sign * c)
        for nx, ny, dc in _tensor_diff(x, y, r):
            _add(out, (k, nx, ny), k_sign * c * dc)
    return out


def verify_chain_identity(r: int) -> ChainReport:
    """Check d((alpha + 1) e_1 (x) a (x) b) = -2^(r+1) e_1 (x) b (x) b.

    Runs over the integers in the coinvariant complex (alpha swaps the
    two tensor factors with the Koszul sign and shifts e-chains).  The
    e_0 parts of the two summands must cancel exactly, d.d must vanish
    on every basis element through k = 2, and the result must be a
    multiple of the single key e_1 (x) b (x) b.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    letters = ("a", "b")
    for k in range(3):
        for x in letters:
            for y in letters:
                key, c = _swap((k, x, y), 1)
                key2, c2 = _swap(key, c)
                if (key2, c2) != ((k, x, y), 1):
                    raise EngineError("alpha is not an involution")
                dd = _diff(_diff({(k, x, y): 1}, r), r)
                if dd:
                    raise EngineError(
                        f"d.d is nonzero on e_{k} (x) {x} (x) {y}"
                    )
    skey, sc = _swap((1, "a", "b"), 1)
    xi = {(1, "a", "b"): 1}
    _add(xi, skey, sc)
    image = _diff(xi, r)
    intermediate_zero = all(k >= 1 for (k, _, _) in image)
    support = set(image)
    if support != {(1, "b", "b")}:
        raise EngineError(
            "chain image is not supported on e_1 (x) b (x) b alone: "
            + ", ".join(map(str, sorted(support)))
        )
    coefficient = image[(1, "b", "b")]
    expected = -(2 ** (r + 1))
    return ChainReport(
        r, coefficient, expected, intermediate_zero, coefficient == expected
    )
