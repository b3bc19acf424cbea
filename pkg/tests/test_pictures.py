import pytest

from picturelang.errors import AlphabetError, PictureError
from picturelang.pictures import (
    BORDER,
    PADDING,
    Picture,
    RectPicture,
    bordered_value,
    coordinate_structure,
    is_c_balanced,
    lex_successor,
    make_picture,
    picture_from_text,
    picture_to_text,
    pixel_structure,
    square_picture,
    word,
)


def test_make_picture_word():
    p = make_picture(1, 2, ["a", "b"], ["a", "b"])
    assert p[(1,)] == "a" and p[(2,)] == "b"


def test_make_picture_2x2():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    assert p[(1, 1)] == "0"
    assert p[(1, 2)] == "1"
    assert p[(2, 1)] == "1"
    assert p[(2, 2)] == "0"


def test_reserved_symbols_rejected():
    with pytest.raises(AlphabetError):
        make_picture(1, 2, ["a", BORDER], ["a", BORDER])
    with pytest.raises(AlphabetError):
        make_picture(1, 1, ["a", PADDING], ["a"])


def test_cell_length_mismatch():
    with pytest.raises(PictureError):
        make_picture(1, 2, ["a"], ["a"])


def test_non_alphabet_cell():
    with pytest.raises(AlphabetError):
        make_picture(1, 2, ["a"], ["a", "b"])


def test_bordered_value():
    p = word("ab")
    assert bordered_value(p, (0,)) == BORDER
    assert bordered_value(p, (1,)) == "a"
    assert bordered_value(p, (3,)) == BORDER
    q = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    assert bordered_value(q, (3, 1)) == BORDER
    with pytest.raises(PictureError):
        bordered_value(q, (4, 1))


def test_bordered_agrees_inside():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    for a in p.domain():
        assert bordered_value(p, a) == p[a]


def test_pixel_structure_word():
    S = pixel_structure(word("ab"))
    assert S.size == 2
    assert S.relations["Q_a"][1] == frozenset({(1,)})
    assert S.relations["Q_b"][1] == frozenset({(2,)})
    assert S.relations["min_1"][1] == frozenset({(1,)})
    assert S.relations["max_1"][1] == frozenset({(2,)})
    assert S.functions["suc_1"] == {1: 2, 2: 1}


def test_pixel_structure_2x2_corner():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    S = pixel_structure(p)
    corner = (p.rank((2, 2)) + 1,)
    assert corner not in S.relations["min_1"][1]
    assert corner not in S.relations["min_2"][1]
    assert corner in S.relations["max_1"][1]
    assert corner in S.relations["max_2"][1]


def test_pixel_structure_singleton():
    p = make_picture(2, 1, ["a"], ["a"])
    S = pixel_structure(p)
    for i in (1, 2):
        assert S.functions[f"suc_{i}"] == {1: 1}
        assert (1,) in S.relations[f"min_{i}"][1]
        assert (1,) in S.relations[f"max_{i}"][1]


def test_pixel_suc_is_cyclic_bijection():
    p = make_picture(2, 3, ["a"], ["a"] * 9)
    S = pixel_structure(p)
    for i in (1, 2):
        f = S.functions[f"suc_{i}"]
        assert sorted(f.values()) == list(range(1, 10))
        for start in range(1, 10):
            v = start
            for _ in range(3):
                v = f[v]
            assert v == start


def test_coordinate_structure_word():
    S = coordinate_structure(word("ab"))
    assert S.size == 2
    assert S.relations["Q_a"][1] == frozenset({(1,)})
    assert S.relations["Q_b"][1] == frozenset({(2,)})
    assert S.relations["<"][1] == frozenset({(1, 2)})
    assert S.relations["min"][1] == frozenset({(1,)})
    assert S.relations["max"][1] == frozenset({(2,)})


def test_coordinate_structure_2x2():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    S = coordinate_structure(p)
    assert S.relations["Q_1"][1] == frozenset({(1, 2), (2, 1)})


def test_coordinate_letter_relations_partition():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    S = coordinate_structure(p)
    cells = {a for a in p.domain()}
    union = S.relations["Q_0"][1] | S.relations["Q_1"][1]
    assert union == cells
    assert not (S.relations["Q_0"][1] & S.relations["Q_1"][1])


def test_square_picture_noop_and_pad():
    assert square_picture(make_picture(1, 1, ["a"], ["a"])).cells == ("a",)
    r = RectPicture(2, (2, 1), ("a", "b"), ("a", "b"))
    q = square_picture(r)
    assert q.n == 2
    assert q[(1, 1)] == "a" and q[(2, 1)] == "b"
    assert q[(1, 2)] == PADDING and q[(2, 2)] == PADDING


def test_square_picture_3x2x3():
    sides = (3, 2, 3)
    cells = tuple("a" for _ in range(18))
    r = RectPicture(3, sides, ("a",), cells)
    q = square_picture(r)
    assert q.n == 3
    padded = sum(1 for a in q.domain() if q[a] == PADDING)
    assert padded == 27 - 18


def test_square_restriction_identity():
    r = RectPicture(2, (2, 1), ("a", "b"), ("a", "b"))
    q = square_picture(r)
    for a in r.domain():
        assert q[a] == r[a]


def test_coordinate_structure_of_rectangle_squares_first():
    r = RectPicture(2, (2, 1), ("a",), ("a", "a"))
    S = coordinate_structure(r)
    assert S.size == 2
    assert (1, 2) in S.relations[f"Q_{PADDING}"][1]


def test_is_c_balanced():
    sq = make_picture(2, 2, ["a"], ["a"] * 4)
    assert is_c_balanced(sq, 1)
    r = RectPicture(2, (4, 2), ("a",), ("a",) * 8)
    assert not is_c_balanced(r, 1)
    assert is_c_balanced(r, 2)


def test_lex_successor():
    assert lex_successor((1, 2), 2) == (2, 1)
    assert lex_successor((2, 2), 2) is None
    assert lex_successor((1, 2, 2), 2) == (2, 1, 1)


def test_lex_successor_enumerates_domain():
    n, d = 3, 2
    seen = [(1,) * d]
    while True:
        nxt = lex_successor(seen[-1], n)
        if nxt is None:
            break
        seen.append(nxt)
    assert len(seen) == n**d
    assert seen[-1] == (n,) * d
    assert len(set(seen)) == n**d
    assert seen == sorted(seen)


def test_text_round_trip():
    p = make_picture(2, 2, ["0", "1"], ["0", "1", "1", "0"])
    text = picture_to_text(p)
    assert text == "2 2\n0 1\n0 1\n1 0\n"
    assert picture_from_text(text) == p
    w = word("ab")
    assert picture_from_text(picture_to_text(w)) == w
