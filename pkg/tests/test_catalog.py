"""Torsion-family catalog: golden degrees, orders, and serialization."""

import json

import pytest

from loopalg import (
    adams_period,
    cmn_summands,
    entries_to_csv,
    entries_to_json,
    even_families,
    low_homotopy,
    odd_families,
)


def test_adams_period_values():
    assert adams_period(3, 1) == 4
    assert adams_period(3, 2) == 12
    assert adams_period(5, 1) == 8
    assert adams_period(5, 2) == 40
    assert adams_period(2, 2) == 8
    assert adams_period(2, 3) == 8
    assert adams_period(2, 4) == 8
    assert adams_period(2, 5) == 16
    assert adams_period(2, 6) == 32


def test_odd_families_golden_table():
    entries = odd_families(3, 1, 2, 1, t_max=4)
    odd_space = [e for e in entries if e.space == "P^5(3)"]
    even_space = [e for e in entries if e.space == "P^4(3)"]
    assert [e.degree for e in odd_space] == [11, 23, 35, 47, 59]
    assert [e.degree for e in even_space] == [17, 29, 41, 53, 65]
    assert all(e.order == 9 for e in entries)
    assert all(e.k == 1 for e in entries)
    assert [e.t for e in odd_space] == [0, 1, 2, 3, 4]
    assert all(e.provenance == "v1-periodic" for e in entries)


def test_odd_families_k_bound_is_exact():
    # Both inequalities n p^k >= r+4 and (2n-1) p^k >= r+3 must hold.
    with pytest.raises(ValueError, match="k too small"):
        odd_families(3, 1, 2, 0, t_max=1)
    # r = 2, n = 2, k = 1: 2*3 = 6 >= 6 and 3*3 = 9 >= 5 both hold.
    entries = odd_families(3, 2, 2, 1, t_max=0)
    assert [e.degree for e in entries] == [11, 17]
    assert all(e.order == 27 for e in entries)
    # r = 3 breaks the first inequality at k = 1 for n = 2.
    with pytest.raises(ValueError, match="k too small"):
        odd_families(3, 3, 2, 1, t_max=0)


def test_odd_families_step_uses_r_not_k():
    entries = odd_families(5, 1, 2, 1, t_max=2)
    odd_space = [e.degree for e in entries if e.space == "P^5(5)"]
    # 2n p^k - 1 = 19; the v1 self-map advances by 2(p-1)p^r = 40.
    assert odd_space == [19, 59, 99]


def test_cmn_summands_golden():
    entries = cmn_summands(3, 1, 2, 2)
    assert [e.degree for e in entries] == [11, 35]
    assert all(e.provenance == "CMN" for e in entries)
    assert all(e.space == "P^5(3)" for e in entries)
    assert all(e.t is None for e in entries)


def test_even_families_golden():
    entries = even_families(2, 2)
    p5 = [e for e in entries if e.space == "P^5(4)"]
    p9 = [e for e in entries if e.space == "P^9(4)"]
    assert [e.degree for e in p5] == [11, 19]
    assert all(e.order == 8 for e in p5)
    assert [e.degree for e in p9] == [15, 23]
    assert all(e.order == 8 for e in p9)
    entries3 = even_families(3, 2)
    assert all(e.space == "P^9(8)" for e in entries3)
    assert all(e.order == 16 for e in entries3)
    with pytest.raises(ValueError):
        even_families(1, 2)
    with pytest.raises(ValueError):
        even_families(4, 2)


def test_low_homotopy_table():
    assert low_homotopy(3, 1, 4) == ("Z/3", "0")
    assert low_homotopy(2, 2, 4) == ("Z/4", "Z/2")
    with pytest.raises(ValueError):
        low_homotopy(3, 1, 3)


def test_csv_and_json_serialization():
    entries = odd_families(3, 1, 2, 1, t_max=1)
    csv_text = entries_to_csv(entries)
    lines = csv_text.strip().split("\n")
    assert lines[0] == "space,degree,order,k,t,provenance"
    assert lines[1] == "P^5(3),11,9,1,0,v1-periodic"
    assert len(lines) == 1 + len(entries)
    # None fields serialize as empty cells.
    cmn_csv = entries_to_csv(cmn_summands(3, 1, 2, 1))
    assert cmn_csv.strip().split("\n")[1] == "P^5(3),11,9,1,,CMN"
    js = entries_to_json(entries)
    parsed = json.loads(json.dumps(js))
    assert parsed[0]["degree"] == 11 and parsed[0]["order"] == 9
