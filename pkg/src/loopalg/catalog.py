"""Arithmetic catalog of torsion families in Moore-space homotopy.

Pure closed-form bookkeeping: degrees and orders of the periodic
Z/p^(r+1) families, the summand degrees coming from the top homology
groups, the Adams self-map periods they step by, and the first two
homotopy groups above the bottom cell.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra_core import Coefficients


@dataclass(frozen=True)
class FamilyEntry:
    """One torsion summand: where it lives, its degree, and its order."""

    space: str
    degree: int
    order: int
    k: int | None
    t: int | None
    provenance: str

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "degree": self.degree,
            "order": self.order,
            "k": self.k,
            "t": self.t,
            "provenance": self.provenance,
        }


def adams_period(p: int, r: int) -> int:
    """Degree of the v1 self-map of the mod-p^r Moore space."""
    Coefficients(p, r)
    if p == 2:
        return max(8, 2 ** (r - 1))
    return 2 * (p - 1) * p ** (r - 1)


def odd_families(p: int, r: int, n: int, k: int, t_max: int) -> list[FamilyEntry]:
    """Periodic Z/p^(r+1) families in the odd and even Moore spaces.

    Degrees 2np^k - 1 + t.q.p^r in P^(2n+1)(p^r) and (4n-2)p^k - 1 +
    t.q.p^r in P^(2n)(p^r), t = 0..t_max, where q = 2(p-1).  k must be
    large enough that both seed classes exist, checked by the exact
    integer inequalities n.p^k >= r + 4 and (2n-1).p^k >= r + 3.
    """
    coeffs = Coefficients(p, r)
    if not coeffs.odd:
        raise ValueError("the odd-primary families need p odd")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    pk = p**k
    if n * pk < r + 4 or (2 * n - 1) * pk < r + 3:
        raise ValueError(
            f"k too small: need n*p^k >= r+4 and (2n-1)*p^k >= r+3, "
            f"got p^k = {pk} at n = {n}, r = {r}"
        )
    step = 2 * (p - 1) * p**r
    order = p ** (r + 1)
    odd_space = f"P^{2 * n + 1}({p**r})"
    even_space = f"P^{2 * n}({p**r})"
    entries = [
        FamilyEntry(odd_space, 2 * n * pk - 1 + t * step, order, k, t, "v1-periodic")
        for t in range(t_max + 1)
    ]
    entries += [
        FamilyEntry(
            even_space, (4 * n - 2) * pk - 1 + t * step, order, k, t, "v1-periodic"
        )
        for t in range(t_max + 1)
    ]
    return entries


def cmn_summands(p: int, r: int, n: int, k_max: int) -> list[FamilyEntry]:
    """The Z/p^(r+1) summands detected by the top weight-p^k groups."""
    coeffs = Coefficients(p, r)
    if not coeffs.odd:
        raise ValueError("the summand list needs p odd")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    space = f"P^{2 * n + 1}({p**r})"
    return [
        FamilyEntry(space, 2 * n * p**k - 1, p ** (r + 1), k, None, "CMN")
        for k in range(1, k_max + 1)
    ]


def even_families(r: int, t_max: int) -> list[FamilyEntry]:
    """2-primary periodic families: P^5(4) at 3 + 8t and P^9(2^r) at 7 + 8t.

    The P^5(4) line exists only for r = 2 (the statement does not extend
    to r = 3); both lines start at t = 1.
    """
    if r not in (2, 3):
        raise ValueError(f"r must be 2 or 3, got {r}")
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    entries: list[FamilyEntry] = []
    if r == 2:
        entries += [
            FamilyEntry("P^5(4)", 3 + 8 * t, 8, None, t, "v1-periodic (2-primary)")
            for t in range(1, t_max + 1)
        ]
    entries += [
        FamilyEntry(
            f"P^9({2**r})",
            7 + 8 * t,
            2 ** (r + 1),
            None,
            t,
            "v1-periodic (2-primary)",
        )
        for t in range(1, t_max + 1)
    ]
    return entries


def low_homotopy(p: int, r: int, n: int) -> tuple[str, str]:
    """The homotopy groups just above the bottom cell of P^n(p^r).

    Returns the groups in dimensions n - 1 and n.  Needs n >= 4: one
    dimension lower the answer genuinely differs (pi_3 of P^3(2) is
    Z/4, not Z/2 + Z/2).
    """
    Coefficients(p, r)
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    return (f"Z/{p**r}", "Z/2" if p == 2 else "0")


def entries_to_csv(entries: list[FamilyEntry]) -> str:
    lines = ["space,degree,order,k,t,provenance"]
    for e in entries:
        k = "" if e.k is None else str(e.k)
        t = "" if e.t is None else str(e.t)
        lines.append(f"{e.space},{e.degree},{e.order},{k},{t},{e.provenance}")
    return "\n".join(lines) + "\n"


def entries_to_json(entries: list[FamilyEntry]) -> list[dict]:
    return [e.to_json() for e in entries]
