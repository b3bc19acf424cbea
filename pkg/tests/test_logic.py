import pytest

from picturelang.errors import FragmentError, ParseError
from picturelang.logic import (
    And,
    EsoSentence,
    ForAll,
    Iff,
    Rel,
    Signature,
    Term,
    classify_fragment,
    is_sorted,
    parse_sentence,
    render_sentence,
)

PIX1 = Signature("pixel", 1, ("a", "b"))
PIX2 = Signature("pixel", 2, ("a", "b"))
COORD1 = Signature("coordinate", 1, ("a", "b"))


def test_parse_simple_eso():
    s = parse_sentence("(exists-rel ((U 1)) (forall (x) (U x)))", PIX1)
    assert s.guessed == (("U", 1),)
    assert s.body == ForAll(("x",), Rel("U", (Term("x"),)))


def test_parse_fo_sentence():
    s = parse_sentence("(forall (x) (Q_a x))", PIX1)
    assert s.guessed == ()


def test_parse_successor_atom():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R (suc x) y)))", COORD1)
    atom = s.body.body
    assert atom == Rel("R", (Term("x", (0,)), Term("y")))


def test_parse_pixel_successors_commute_to_canonical():
    s = parse_sentence("(forall (x) (Q_a (suc_2 (suc_1 x))))", PIX2)
    t = s.body.body.args[0]
    assert t.sucs == (1, 2)


def test_render_round_trip():
    for text, sig in [
        ("(exists-rel ((U 1)) (forall (x) (U x)))", PIX1),
        ("(forall (x) (Q_a x))", PIX1),
        ("(exists-rel ((R 2)) (forall (x y) (R (suc x) y)))", COORD1),
        ("(forall (x y) (xor (= x y) (< x y)))", COORD1),
        ("(exists-rel ((P 0)) (implies (P) (P)))", COORD1),
    ]:
        s = parse_sentence(text, sig)
        rendered = render_sentence(s)
        assert parse_sentence(rendered, sig) == s
        assert render_sentence(parse_sentence(rendered, sig)) == rendered


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_sentence("(forall (x) (Q_a x)", PIX1)
    with pytest.raises(FragmentError):
        parse_sentence("(forall (x) (Q_zzz x))", PIX1)
    with pytest.raises(FragmentError):
        parse_sentence("(forall (x) (Q_a x x))", PIX1)
    with pytest.raises(FragmentError):
        parse_sentence("(forall (x y) (= x y))", PIX2)  # equality is coordinate-only
    with pytest.raises(FragmentError):
        parse_sentence("(forall (x) (min_1 x))", COORD1)  # indexed extrema are pixel-only


def test_unbound_variable_rejected():
    with pytest.raises(FragmentError):
        parse_sentence("(forall (x) (Q_a y))", PIX1)


def test_classify_fragment():
    s = parse_sentence("(exists-rel ((U 1)) (forall (x) (U x)))", PIX1)
    fd = classify_fragment(s)
    assert fd.variables == 1
    assert fd.prenex_universal and fd.prefix_length == 1
    assert fd.max_guessed_arity == 1

    s2 = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R x y)))", COORD1)
    fd2 = classify_fragment(s2)
    assert fd2.variables == 2 and fd2.prefix_length == 2 and fd2.max_guessed_arity == 2

    s3 = parse_sentence("(exists-rel ((R 2)) (forall (x) (exists (y) (R x y))))", COORD1)
    assert not classify_fragment(s3).prenex_universal


def test_is_sorted_positive():
    s = parse_sentence(
        "(exists-rel ((R 2)) (forall (x y) (and (Q_a x) (and (R x y) (R x (suc y))))))",
        COORD1,
    )
    assert is_sorted(s, k=1, d=2)
    assert classify_fragment(s).sorted


def test_is_sorted_rejects_permuted_tuple():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R y x)))", COORD1)
    assert not is_sorted(s, k=1, d=2)


def test_is_sorted_rejects_double_successor():
    s = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R (suc x) (suc y))))", COORD1)
    assert not is_sorted(s, k=1, d=2)


def test_is_sorted_rejects_comparisons_and_wrong_arity():
    s = parse_sentence("(forall (x y) (< x y))", COORD1)
    assert not is_sorted(s, k=1, d=2)
    s2 = parse_sentence("(exists-rel ((U 1)) (forall (x y) (U x)))", COORD1)
    assert not is_sorted(s2, k=1, d=2)


def test_is_sorted_needs_coordinate_signature():
    s = parse_sentence("(forall (x) (Q_a x))", PIX1)
    with pytest.raises(FragmentError):
        is_sorted(s, k=1, d=1)


def test_is_sorted_stable_under_renaming():
    a = parse_sentence("(exists-rel ((R 2)) (forall (x y) (R x y)))", COORD1)
    b = parse_sentence("(exists-rel ((S 2)) (forall (x y) (S x y)))", COORD1)
    assert is_sorted(a, 1, 2) == is_sorted(b, 1, 2)


def test_guessed_collision_rejected():
    with pytest.raises(FragmentError):
        EsoSentence(PIX1, (("Q_a", 1),), ForAll(("x",), Rel("Q_a", (Term("x"),))))
