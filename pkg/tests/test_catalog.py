from math import gcd

import pytest

from caprng.ca import RuleVector, char_poly, verify_maximal_period
from caprng.catalog import (
    Maximality,
    build_rule_vector,
    find_coprime_pairs,
    get_entry,
    load_catalog,
    parse_catalog,
)
from caprng.errors import CatalogError

from helpers import load_reference_table

SIZES_PRIME_FAMILIES = (26, 29, 35, 39, 65, 69, 105, 113, 119)


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


def test_shipped_catalog_cardinality(catalog):
    fams = [e.family for e in catalog]
    assert fams.count("table-mca") == 100
    assert fams.count("ca90prime") == len(SIZES_PRIME_FAMILIES)
    assert fams.count("ca150prime") == len(SIZES_PRIME_FAMILIES)
    assert {e.id for e in catalog if e.family == "literature"} == {"R1_BIST", "R2", "R3", "R4"}


def test_table_rows_match_reference_positions(catalog):
    ref = load_reference_table()
    table = {e.k: e for e in catalog if e.family == "table-mca"}
    assert sorted(table) == sorted(ref) == list(range(29, 129))
    for k, (pos, _n1, _r) in ref.items():
        assert table[k].rule150_positions == pos


def test_known_entries(catalog):
    e32 = get_entry(catalog, 32)
    assert e32.rule150_positions == (1, 15) and e32.n1 == 11
    e92 = get_entry(catalog, 92)
    assert e92.rule150_positions == (3, 71) and e92.n1 == 45
    rv = build_rule_vector(get_entry(catalog, "ca90p-29"))
    assert rv.rules == (150,) + (90,) * 28
    rv = build_rule_vector(get_entry(catalog, "ca150p-29"))
    assert rv.rules == (90,) + (150,) * 28


def test_example_rule_vectors(catalog):
    r31 = build_rule_vector(get_entry(catalog, 31)).rules
    assert r31.index(150) == 10 and r31.count(150) == 1
    r32 = build_rule_vector(get_entry(catalog, 32)).rules
    assert r32[0] == 150 and r32[14] == 150 and r32.count(150) == 2


def test_r1_bist_vector(catalog):
    want = (90, 150, 90, 90, 90, 150, 150, 90, 90, 90, 90, 90, 150, 90, 90, 150, 150, 90,
            150, 150, 150, 90, 150, 150, 150, 150, 90, 150, 90, 150, 90, 150)
    assert build_rule_vector(get_entry(catalog, "R1_BIST")).rules == want


def test_n1_recomputed_matches_file(catalog):
    for e in catalog:
        assert e.n1 == char_poly(build_rule_vector(e)).n1


def test_errata_rows_keep_printed_value(catalog):
    ref = load_reference_table()
    diffs = {e.k: (e.n1, e.published_n1) for e in catalog if e.family == "table-mca" and e.published_n1 is not None}
    assert diffs == {36: (19, 16), 41: (19, 17)}
    for k, (_c, printed) in diffs.items():
        assert ref[k][1] == printed


def test_small_entries_verified_at_load(catalog):
    for e in catalog:
        if e.k <= 32 and e.family != "literature":
            assert e.maximal_verified is Maximality.VERIFIED
        elif e.family == "table-mca":
            assert e.maximal_verified is Maximality.ASSUMED
    assert get_entry(catalog, "R3").maximal_verified is Maximality.UNCLAIMED
    assert get_entry(catalog, "R1_BIST").maximal_verified is Maximality.VERIFIED


def test_prime_families_are_maximal(catalog):
    for e in catalog:
        if e.family in ("ca90prime", "ca150prime"):
            assert verify_maximal_period(build_rule_vector(e), cap=128), e.id


def test_r4_same_as_table_row(catalog):
    assert build_rule_vector(get_entry(catalog, "R4")) == build_rule_vector(get_entry(catalog, 64))
    assert "position-convention-ambiguous" in get_entry(catalog, "R4").notes


@pytest.mark.parametrize(
    "text, msg",
    [
        ("a table-mca 5", "expected"),
        ("a table-mca 5 positions=1 n1=5\na table-mca 5 positions=1 n1=5", "duplicate"),
        ("a table-mca 5 positions=6 n1=3", "out of range"),
        ("a table-mca 5 positions=3,2 n1=3", "increasing"),
        ("a table-mca 5 positions=1,2,3 n1=3", "one or two"),
        ("a ca90prime 5 positions=2 n1=3", "cell 1"),
        ("a weird 5 positions=1 n1=3", "family"),
        ("a table-mca 5 positions=1 n1=4", "n1="),
        ("a table-mca 5 positions=1", "missing"),
    ],
)
def test_malformed_catalog(text, msg):
    with pytest.raises(CatalogError, match=msg):
        parse_catalog(text)


def test_catalog_from_env(tmp_path, monkeypatch):
    f = tmp_path / "cat.txt"
    n1 = char_poly(RuleVector((150, 90, 90, 90, 90))).n1
    f.write_text(f"# tiny\nfive table-mca 5 positions=1 n1={n1}\n")
    monkeypatch.setenv("CAPRNG_CATALOG", str(f))
    (e,) = load_catalog()
    assert e.id == "five" and e.maximal_verified is Maximality.VERIFIED


def test_coprime_pairs_properties(catalog):
    pairs = find_coprime_pairs(catalog, 29, 128)
    by_id = {e.id: e for e in catalog}
    seen = set()
    for a, b in pairs:
        ka, kb = by_id[a].k, by_id[b].k
        assert ka < kb and gcd(ka, kb) == 1
        assert (b, a) not in seen
        seen.add((a, b))
    ks = sorted(e.k for e in catalog if e.family == "table-mca")
    brute = sum(1 for i, x in enumerate(ks) for y in ks[i + 1:] if gcd(x, y) == 1)
    assert len(pairs) == brute


def test_coprime_pairs_examples(catalog):
    pairs = set(find_coprime_pairs(catalog, 31, 34))
    assert ("mca-31", "mca-32") in pairs
    assert ("mca-32", "mca-34") not in pairs


def test_coprime_pair_counts(catalog):
    assert len(find_coprime_pairs(catalog, 32, 64, half_open=True)) == 306
    assert len(find_coprime_pairs(catalog, 32, 64)) == 322
    with pytest.raises(ValueError):
        find_coprime_pairs(catalog, 10, 5)
