import itertools
import random

import pytest

from picturelang.errors import FragmentError
from picturelang.logic import (
    And,
    Signature,
    classify_fragment,
    parse_sentence,
    render_sentence,
)
from picturelang.modelcheck import check_eso, eval_fo
from picturelang.normalize import (
    CAnd,
    CNot,
    CardinalitySentence,
    Threshold,
    as_localized,
    cardinality_to_monadic,
    count_satisfying,
    eval_cardinality,
    localize_pixel_sentence,
    reduce_arities,
    skolemize_universal,
)
from picturelang.pictures import (
    coordinate_structure,
    enumerate_pictures,
    pixel_structure,
    word,
)

PIX1 = Signature("pixel", 1, ("a", "b"))
PIX2 = Signature("pixel", 2, ("0", "1"))
COORD1 = Signature("coordinate", 1, ("a", "b"))


def _agree_pixel(s1, s2, d, alphabet, max_n):
    for n in range(1, max_n + 1):
        for p in enumerate_pictures(d, n, alphabet):
            S = pixel_structure(p)
            assert check_eso(S, s1) == check_eso(S, s2), (p.cells, render_sentence(s2))


# -- localization ------------------------------------------------------------------


def test_localize_is_fixpoint_on_localized_input():
    ts_like = (
        "(exists-rel ((U 1)) (forall (x) (and"
        " (implies (min_1 x) (U x))"
        " (implies (max_1 x) (U x))"
        " (implies (not (max_1 x)) (iff (U x) (U (suc_1 x)))))))"
    )
    s = parse_sentence(ts_like, PIX1)
    assert localize_pixel_sentence(s) is s
    assert as_localized(s) is not None


def test_localize_deep_successor_chain():
    s = parse_sentence("(exists-rel ((U 1)) (forall (x) (U (suc_1 (suc_1 x)))))", PIX1)
    out = localize_pixel_sentence(s)
    assert as_localized(out) is not None
    _agree_pixel(s, out, 1, ("a", "b"), 4)


def test_localize_extremal_atoms_in_boolean_context():
    s = parse_sentence("(forall (x) (or (min_1 x) (Q_a x)))", PIX1)
    out = localize_pixel_sentence(s)
    assert as_localized(out) is not None
    _agree_pixel(s, out, 1, ("a", "b"), 4)


def test_localize_2d_mixed():
    s = parse_sentence(
        "(exists-rel ((U 1)) (forall (x) (iff (U x) (Q_1 (suc_2 (suc_1 x))))))",
        PIX2,
    )
    out = localize_pixel_sentence(s)
    assert as_localized(out) is not None
    for n in range(1, 3):
        for p in enumerate_pictures(2, n, ("0", "1")):
            S = pixel_structure(p)
            assert check_eso(S, s) == check_eso(S, out)


def test_localize_wraps_cyclically():
    # forall x: Q_a(suc_1 x) says every cell's cyclic successor is an 'a',
    # which on words means: all letters are 'a'.
    s = parse_sentence("(forall (x) (Q_a (suc_1 x)))", PIX1)
    out = localize_pixel_sentence(s)
    for w in ["a", "aa", "ab", "ba", "aab"]:
        S = pixel_structure(word(w, ("a", "b")))
        expected = all(c == "a" for c in w)
        assert check_eso(S, out) == expected


def test_localize_rejects_wrong_fragment():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x) (R x x)))", PIX1)
    with pytest.raises(FragmentError):
        localize_pixel_sentence(s)
    s2 = parse_sentence("(exists (x) (Q_a x))", PIX1)
    with pytest.raises(FragmentError):
        localize_pixel_sentence(s2)


# -- cardinality -------------------------------------------------------------------


def _threshold_sentence(psi_text, k, sig=PIX2):
    psi = parse_sentence(f"(forall (x) {psi_text})", sig).body.body
    return CardinalitySentence(sig, Threshold(psi, k))


def test_cardinality_single_threshold_on_words():
    sig = Signature("pixel", 1, ("0", "1"))
    c = _threshold_sentence("(Q_1 x)", 1, sig)
    out = cardinality_to_monadic(c)
    S10 = pixel_structure(word("10", ("0", "1")))
    S00 = pixel_structure(word("00", ("0", "1")))
    assert check_eso(S10, out)
    assert not check_eso(S00, out)


def test_cardinality_threshold_equals_domain_size():
    for n in (1, 2):
        for p in enumerate_pictures(2, n, ("0", "1")):
            S = pixel_structure(p)
            c_eq = CardinalitySentence(PIX2, Threshold(And(()), n**2))
            c_over = CardinalitySentence(PIX2, Threshold(And(()), n**2 + 1))
            assert check_eso(S, cardinality_to_monadic(c_eq))
            assert not check_eso(S, cardinality_to_monadic(c_over))


def test_cardinality_exactly_one_on_2x2():
    psi = parse_sentence("(forall (x) (Q_1 x))", PIX2).body.body
    c = CardinalitySentence(
        PIX2, CAnd((Threshold(psi, 1), CNot(Threshold(psi, 2))))
    )
    out = cardinality_to_monadic(c)
    for p in enumerate_pictures(2, 2, ("0", "1")):
        S = pixel_structure(p)
        expected = sum(ch == "1" for ch in p.cells) == 1
        assert check_eso(S, out) == expected
        assert eval_cardinality(S, c) == expected


def test_cardinality_agrees_with_direct_count_randomized():
    rng = random.Random(31)
    sig = Signature("pixel", 1, ("0", "1"))
    atom_texts = ["(Q_1 x)", "(Q_0 (suc_1 x))", "(not (Q_1 x))"]
    for _ in range(10):
        psi_text = rng.choice(atom_texts)
        k = rng.randint(1, 3)
        c = _threshold_sentence(psi_text, k, sig)
        out = cardinality_to_monadic(c)
        assert classify_fragment(out).prenex_universal
        assert classify_fragment(out).max_guessed_arity == 1
        for n in range(1, 4):
            for p in enumerate_pictures(1, n, ("0", "1")):
                S = pixel_structure(p)
                psi = c.root.psi
                expected = count_satisfying(S, psi, "x") >= k
                assert check_eso(S, out) == expected


def test_cardinality_output_size_linear():
    sig = Signature("pixel", 1, ("0", "1"))
    psi = parse_sentence("(forall (x) (Q_1 x))", sig).body.body
    sizes = []
    for k in (1, 2, 4, 8):
        out = cardinality_to_monadic(CardinalitySentence(sig, Threshold(psi, k)))
        sizes.append(len(render_sentence(out)))
    # growth is at most linear in k: doubling k less than triples the size
    assert sizes[3] < 3 * sizes[2]


# -- Skolemization ------------------------------------------------------------------


def test_skolemize_paper_shape():
    s = parse_sentence(
        "(exists-rel ((U 2) (D 2)) (exists (x) (or (forall (y) (U x y)) (exists (y) (D x y)))))",
        COORD1,
    )
    out = skolemize_universal(s, 2)
    fd = classify_fragment(out)
    assert fd.prenex_universal and fd.prefix_length == 2
    for n in range(1, 4):
        for p in enumerate_pictures(1, n, ("a", "b")):
            S = coordinate_structure(p)
            assert check_eso(S, s) == check_eso(S, out)


def test_skolemize_fixpoint_semantics_on_universal_input():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R x y)))", COORD1)
    out = skolemize_universal(s, 2)
    for n in range(1, 4):
        for p in enumerate_pictures(1, n, ("a", "b")):
            S = coordinate_structure(p)
            assert check_eso(S, s) == check_eso(S, out)


def test_skolemize_forall_exists_less():
    # forall x exists y (x < y) fails on every finite order
    s = parse_sentence("(forall (x) (exists (y) (< x y)))", COORD1)
    out = skolemize_universal(s, 2)
    assert classify_fragment(out).prenex_universal
    for n in range(1, 5):
        for p in enumerate_pictures(1, n, ("a",)):
            S = coordinate_structure(p)
            assert not eval_fo(S, s.body)
            assert not check_eso(S, out)


def test_skolemize_exists_only():
    s = parse_sentence("(exists (x) (Q_a x))", COORD1)
    out = skolemize_universal(s, 1)
    for w in ["a", "b", "ab", "bb", "bba"]:
        S = coordinate_structure(word(w, ("a", "b")))
        assert check_eso(S, out) == ("a" in w)


# -- arity reduction ----------------------------------------------------------------


def test_reduce_arities_paper_example():
    s = parse_sentence(
        "(exists-rel ((R 3)) (forall (x y) (and (R x y x) (not (R y x y)))))",
        COORD1,
    )
    out = reduce_arities(s)
    assert classify_fragment(out).max_guessed_arity == 2
    for n in range(1, 4):
        for p in enumerate_pictures(1, n, ("a",)):
            S = coordinate_structure(p)
            assert not check_eso(S, s)
            assert not check_eso(S, out)


def test_reduce_arities_fixpoint_on_small_arities():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R x y)))", COORD1)
    assert reduce_arities(s) is s


def test_reduce_arities_tautology():
    s = parse_sentence(
        "(exists-rel ((R 3)) (forall (x y) (or (R x x y) (not (R x x y)))))",
        COORD1,
    )
    out = reduce_arities(s)
    for n in range(1, 4):
        for p in enumerate_pictures(1, n, ("a",)):
            S = coordinate_structure(p)
            assert check_eso(S, out)


def test_reduce_arities_equivalence_randomized():
    rng = random.Random(41)
    arg_choices = ["x", "y", "(suc x)", "(suc y)"]
    for _ in range(12):
        args1 = " ".join(rng.choice(arg_choices) for _ in range(3))
        args2 = " ".join(rng.choice(arg_choices) for _ in range(3))
        conn = rng.choice(["and", "or", "implies"])
        neg = rng.choice(["", "not-"])
        a2 = f"(R {args2})"
        if neg:
            a2 = f"(not {a2})"
        text = f"(exists-rel ((R 3)) (forall (x y) ({conn} (R {args1}) {a2})))"
        s = parse_sentence(text, COORD1)
        out = reduce_arities(s)
        for n in range(1, 4):
            for p in enumerate_pictures(1, n, ("a",)):
                S = coordinate_structure(p)
                assert check_eso(S, s) == check_eso(S, out), text
