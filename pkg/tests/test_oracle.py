import pytest

from imaged import data
from imaged.morphisms import Morphism, apply
from imaged.oracle import FactorOracle, QueryTooLong, window_length
from imaged.words import enumerate_free, factor_set


def test_window_length():
    assert window_length(300, 37) == 10
    assert window_length(1952, 342) == 7
    assert window_length(37, 37) == 2


def test_small_oracle_matches_direct_images(m37):
    o = FactorOracle.build(m37, "7/4", 60)
    direct = set()
    for y in enumerate_free(3, "7/4", o.window):
        direct |= factor_set(apply(m37, y), 60)
    assert o.factors_of_length(60) == direct
    # images of longer free words add nothing
    for y in enumerate_free(3, "7/4", 6):
        assert factor_set(apply(m37, y), 60) <= direct


def test_membership(oracle37):
    assert not oracle37.is_factor("0010")
    assert oracle37.is_factor("00")
    assert oracle37.is_factor("")
    assert "0001110101" in oracle37


def test_over_length_query(oracle37):
    with pytest.raises(QueryTooLong):
        oracle37.is_factor("0" * 301)


def test_witness_points_at_the_factor(oracle37, m37):
    v = "110100011010100110"
    y, off = oracle37.witness(v)
    assert apply(m37, y)[off:off + len(v)] == v
    assert oracle37.witness("0010") is None


def test_occurrences(oracle37):
    occ = oracle37.occurrences("0001110", limit=5)
    assert len(occ) == 5
    assert all(oracle37.text.startswith("0001110", i) for i in occ)


def test_properties_of_m37(oracle37):
    assert oracle37.check_avoids(data.F7) is None
    assert oracle37.check_avoids(data.F7 + ("00",)) == "00"
    assert oracle37.square_roots(2).all_roots() == ["0", "1", "01", "10"]
    assert oracle37.check_no_complement_pairs(7) is None
    assert oracle37.check_length_cover(7, [["0101"], ["1010"], ["00", "11"]]) is None
    assert len(oracle37.factors_of_length(7)) == 26


def test_cover_reports_offender(oracle37):
    bad = oracle37.check_length_cover(7, [["0101"]])
    assert bad is not None and "0101" not in bad


def test_square_roots_brute_force(m37):
    o = FactorOracle.build(m37, "7/4", 40)
    inv = o.square_roots(20)
    facts = {L: o.factors_of_length(L) for L in range(2, 41, 2)}
    brute = {u for L, fs in facts.items() for w in fs if w[:L // 2] == w[L // 2:] for u in [w[:L // 2]]}
    assert set(inv.all_roots()) == brute


def test_build_rejects_bad_input(m37):
    with pytest.raises(ValueError):
        FactorOracle.build(m37, "2", 10)
    with pytest.raises(ValueError):
        FactorOracle.build(Morphism(("0", "01")), "7/4", 10)


def test_cache_round_trip(tmp_path, m37):
    a = FactorOracle.build(m37, "7/4", 100, cache_dir=tmp_path)
    assert list(tmp_path.iterdir())
    b = FactorOracle.build(m37, "7/4", 100, cache_dir=tmp_path)
    assert a.windows == b.windows and a.text == b.text


def test_properties_of_m342(oracle342, roots342):
    assert oracle342.window == 7
    assert not oracle342.is_factor("1001")
    assert oracle342.check_avoids(data.F342) is None
    assert len(roots342) == 873
    assert roots342.max_period == 244
