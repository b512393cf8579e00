import itertools
import random

import pytest

from imaged import data
from imaged.imaged import parse_as_image
from imaged.morphisms import Morphism, apply
from imaged.search import (
    CAP_EXCEEDED, TREE_FINITE, BigSquareProblem, SearchConfig, Thm3Problem,
    Thm5Problem, certified_factors, max_word_without_big_squares, run_search,
    suffix_image, thm3_search, thm5_search,
)
from imaged.words import complement


def test_big_squares():
    assert max_word_without_big_squares(2)[0] == 18
    assert max_word_without_big_squares(1) == (3, ["010", "101"])
    # squares of period >= 3 are avoidable over two letters
    with pytest.raises(ValueError):
        max_word_without_big_squares(3)


def test_big_square_prune():
    p = BigSquareProblem(2)
    assert p.prune("0101") == "square"
    assert p.prune("0011") is None
    with pytest.raises(ValueError):
        BigSquareProblem(0)


def test_thm3_rules():
    p = Thm3Problem()
    assert p.prune("00110000") == "R1"
    # complement of the length-6 suffix 110100 is 001011, which occurs earlier
    assert p.prune("0010110110100") == "R2"
    img = apply(Morphism(("0", "10")), "010001")
    r3 = Thm3Problem(rules=("R3",))
    assert r3.prune("010001" + img) == "R3"
    assert r3.prune("101110" + img) == "R3"  # complement of f present
    assert r3.prune("0" + img) is None  # neither f nor its complement present
    assert suffix_image("0" + img, "010001") == Morphism(("0", "10"))


def test_suffix_image_respects_min_sum():
    # 010001 is a suffix image of itself only under the identity, which is excluded
    assert suffix_image("1010001", "010001", 3) is None


def test_r3_complement_coverage():
    def coded(f, s):
        return any(len(m.images[0]) + len(m.images[1]) >= 3 for m in parse_as_image(s, f))

    for f in data.L16:
        fbar = complement(f)
        for n in range(len(f), 13):
            for t in itertools.product("01", repeat=n):
                s = "".join(t)
                assert coded(f, s) == coded(fbar, s), (f, s)
        for m in (Morphism(("0", "10")), Morphism(("01", "1"))):
            assert apply(m, f) == apply(m.swapped(), fbar)


def test_negative_control_without_r3():
    rep = thm3_search(cfg=SearchConfig(depth_cap=60, rules=("R1", "R2")))
    assert rep.outcome == CAP_EXCEEDED
    assert rep.max_depth == 60


def test_rule_subset_monotonicity():
    nodes = {}
    for k in range(4):
        for rules in itertools.combinations(("R1", "R2", "R3"), k):
            cfg = SearchConfig(depth_cap=13, rules=rules, stop_at_cap=False)
            nodes[rules] = thm3_search(cfg=cfg).nodes_visited
    for big in nodes:
        for small in nodes:
            if set(small) <= set(big):
                assert nodes[small] >= nodes[big], (small, big)


def test_thm5_target_one_prunes_at_root():
    rep = thm5_search(1)
    assert rep.tree_finite
    assert rep.nodes_visited == 1 and rep.max_depth == 0


def test_thm5_rejects_bad_target():
    with pytest.raises(ValueError):
        Thm5Problem(0)


def test_incremental_count_matches_recomputation():
    rng = random.Random(11)
    p = Thm5Problem(target=10**6)  # never exits early
    for _ in range(1000):
        state = p.root()
        prev = 1
        for _ in range(rng.randint(1, 15)):
            state = p.child(state, rng.choice("01"))
            assert len(state.certified) >= prev
            prev = len(state.certified)
        assert set(state.certified) == certified_factors(state.word), state.word


def test_first_letter_symmetry():
    fixed = thm5_search(12)
    both = thm5_search(12, SearchConfig(first_letter_fixed=False, depth_cap=200))
    assert fixed.tree_finite and both.tree_finite
    # the second half of the tree is the complement of the first
    assert both.nodes_visited == 2 * fixed.nodes_visited - 1


def test_deterministic_across_workers():
    a = thm5_search(20)
    b = thm5_search(20, SearchConfig(depth_cap=200, workers=2, split_depth=4))
    c = thm5_search(20)
    assert a.same_tree(b) and a.same_tree(c)


def test_capped_run_is_deterministic_across_workers():
    cfg1 = SearchConfig(depth_cap=40, rules=("R1", "R2"))
    cfg2 = SearchConfig(depth_cap=40, rules=("R1", "R2"), workers=2, split_depth=6)
    a, b = thm3_search(cfg=cfg1), thm3_search(cfg=cfg2)
    assert a.outcome == CAP_EXCEEDED
    assert a.same_tree(b)


def test_progress_callback_is_called(monkeypatch):
    from imaged import search
    monkeypatch.setattr(search, "PROGRESS_EVERY", 10)
    seen = []
    rep = run_search(BigSquareProblem(2), SearchConfig(depth_cap=100),
                     progress=lambda t, w: seen.append(t.nodes))
    assert rep.outcome == TREE_FINITE and rep.max_depth == 19
    assert seen and all(n % 10 == 0 for n in seen)
