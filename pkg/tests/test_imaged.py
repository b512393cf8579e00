import itertools
import random

import pytest

from imaged import data
from imaged.imaged import (
    EMPTY_RULE, MORPHIC, UNARY_RULE, derive_sf, imaged_in_finite,
    imaged_in_finite_reference, imaged_in_oracle, morphic_witness_in_oracle,
    parse_as_image, parse_morphism_list, verify_thm2,
)
from imaged.morphisms import Morphism, apply
from imaged.search import certified_factors
from imaged.words import complement


def binary(max_len, min_len=0):
    for n in range(min_len, max_len + 1):
        for t in itertools.product("01", repeat=n):
            yield "".join(t)


def test_parse_known_identity():
    assert Morphism(("0", "11")) in parse_as_image("11000011", "100001")
    assert parse_as_image("0110", "01") == [Morphism(("0", "110")), Morphism(("01", "10")), Morphism(("011", "0"))]
    assert parse_as_image("01", "01") == []  # identity excluded


def test_parse_requires_both_letters():
    with pytest.raises(ValueError):
        parse_as_image("000", "00")


def test_parse_as_image_is_complete():
    for f in binary(5, 2):
        if "0" not in f or "1" not in f:
            continue
        images: dict[str, set] = {}
        for x, y in itertools.product(list(binary(3, 1)), repeat=2):
            m = Morphism((x, y))
            if not m.is_identity:
                images.setdefault(apply(m, f), set()).add(m)
        for g, ms in images.items():
            # every morphism with |m(0)|, |m(1)| <= 3 is found; any extra must also map f to g
            got = set(parse_as_image(g, f))
            assert ms <= got
            assert all(apply(m, f) == g for m in got)


def test_rules_for_trivial_words():
    assert imaged_in_finite("", "0101").kind == EMPTY_RULE
    assert imaged_in_finite("000", "01").kind == UNARY_RULE


def test_witness_is_an_occurrence():
    w = "0011010011001011"
    wit = imaged_in_finite("0110", w)
    assert wit.kind == MORPHIC
    img = apply(wit.morphism, "0110")
    assert w[wit.start:wit.start + len(img)] == img
    assert wit.morphism.admissible


def test_kernel_agrees_with_reference():
    rng = random.Random(3)
    for _ in range(1500):
        w = "".join(rng.choice("01") for _ in range(rng.randint(0, 18)))
        f = "".join(rng.choice("01") for _ in range(rng.randint(2, 6)))
        a = imaged_in_finite(f, w)
        b = imaged_in_finite_reference(f, w)
        assert (a is None) == (b is None)
        if a is not None:
            assert a == b


@pytest.fixture(scope="module")
def imaged_sets():
    return {w: certified_factors(w) for w in binary(12)}


def test_imaged_set_is_factor_closed(imaged_sets):
    for w, s in imaged_sets.items():
        for f in s:
            assert f[1:] in s and f[:-1] in s, (w, f)


def test_imaged_set_is_monotone(imaged_sets):
    for w, s in imaged_sets.items():
        if w:
            assert imaged_sets[w[:-1]] <= s and imaged_sets[w[1:]] <= s


def test_imaged_set_is_complement_invariant(imaged_sets):
    for w, s in imaged_sets.items():
        assert imaged_sets[complement(w)] == {complement(f) for f in s}


def test_derive_sf(oracle37):
    assert derive_sf(oracle37) == sorted(data.SF7)


def test_sm_parses_to_ten_neat_morphisms():
    ms = parse_morphism_list(data.SM7)
    assert len(ms) == len(set(ms)) == 10
    assert all(m.neat for m in ms)


def test_oracle_search_matches_exhaustive(oracle37):
    inv = oracle37.square_roots(2)
    for f in binary(8, 4):
        if "00" in f and "11" in f:
            fast = imaged_in_oracle(f, oracle37, inv)
            slow = imaged_in_oracle(f, oracle37, inv, exhaustive=True)
            assert (fast is None) == (slow is None), f
            if fast is not None:
                assert oracle37.is_factor(apply(fast.morphism, f))


def test_oracle_search_needs_both_squares(oracle37):
    with pytest.raises(ValueError):
        imaged_in_oracle("0101", oracle37, oracle37.square_roots(2))


def test_oracle_search_finds_positive_control(oracle342, roots342):
    # 1100011 is in I, so some admissible image must occur
    wit = imaged_in_oracle("1100011", oracle342, roots342)
    assert wit is not None and oracle342.is_factor(apply(wit.morphism, "1100011"))


def test_one_t_word_is_not_imaged(oracle342, roots342):
    assert imaged_in_oracle("1000011", oracle342, roots342) is None


def test_morphic_witnesses(oracle37):
    assert morphic_witness_in_oracle("", oracle37, 2).kind == EMPTY_RULE
    assert morphic_witness_in_oracle("0000", oracle37, 2).kind == UNARY_RULE
    wit = morphic_witness_in_oracle("0110", oracle37, 2)
    assert wit is not None and oracle37.is_factor(apply(wit.morphism, "0110"))


def test_verify_thm2_report(m37):
    rep = verify_thm2(m37)
    assert rep.passed
    assert [s.name for s in rep.stages][0] == "uniform"
    d = rep.to_dict()
    assert d["theorem"] == "thm2" and d["pass"] is True


def test_verify_thm2_mutation_fails(m37):
    broken = Morphism((m37.images[0], m37.images[1], m37.images[0][:-1] + "0"))
    rep = verify_thm2(broken)
    assert not rep.passed
    assert rep.stages[-1].counterexample is not None


def test_keep_going_runs_every_stage(m37):
    broken = Morphism((m37.images[0], m37.images[1], m37.images[0][:-1] + "0"))
    assert len(verify_thm2(broken, keep_going=True).stages) == 10
