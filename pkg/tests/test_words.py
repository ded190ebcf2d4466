import pytest
from hypothesis import given

from acfx.words import (
    ParseError,
    canonical_cyclic_form,
    concat_words,
    conjugate_word,
    conjugator_to,
    cyclic_reduce,
    exponent_sums,
    format_word,
    free_reduce,
    invert_word,
    parse_word,
    word_key,
)
from conftest import W, raw_words, words


def test_letter_order():
    x, X, y, Y = 1, -1, 2, -2
    assert sorted([Y, y, X, x], key=lambda l: word_key((l,))) == [x, X, y, Y]
    assert word_key(W("yy")) > word_key(W("x"))  # length first
    assert word_key(W("xY")) < word_key(W("yx"))


@pytest.mark.parametrize("raw, expected", [("xX", ""), ("xyYXx", "x"), ("xyxYXY", "xyxYXY")])
def test_free_reduce(raw, expected):
    letters = [{"x": 1, "X": -1, "y": 2, "Y": -2}[c] for c in raw]
    assert free_reduce(letters) == (W(expected) if expected else ())


@pytest.mark.parametrize("w, expected", [("xyX", "xYX"), ("1", "1"), ("xxY", "yXX")])
def test_invert_word(w, expected):
    assert invert_word(W(w)) == W(expected)


@pytest.mark.parametrize(
    "u, v, expected",
    [("x", "X", "1"), ("xxxYY", "xyxYXY", "xxxYYxyxYXY"), ("xy", "1", "xy")],
)
def test_concat_words(u, v, expected):
    assert concat_words(W(u), W(v)) == W(expected)


@pytest.mark.parametrize("w, g, expected", [("y", "x", "xyX"), ("xy", "X", "yx"), ("1", "xYx", "1")])
def test_conjugate_word(w, g, expected):
    assert conjugate_word(W(w), W(g)) == W(expected)


@pytest.mark.parametrize(
    "w, core, conj", [("Xyx", "y", "X"), ("xy", "xy", "1"), ("XXyxx", "y", "XX")]
)
def test_cyclic_reduce(w, core, conj):
    assert cyclic_reduce(W(w)) == (W(core), W(conj))


@pytest.mark.parametrize("w, expected", [("yx", "xy"), ("Y", "y"), ("XY", "xy")])
def test_canonical_cyclic_form(w, expected):
    assert canonical_cyclic_form(W(w)) == W(expected)


@pytest.mark.parametrize(
    "w, n, expected", [("xyxYXY", 2, [1, -1]), ("xxxYY", 2, [3, -2]), ("1", 3, [0, 0, 0])]
)
def test_exponent_sums(w, n, expected):
    assert exponent_sums(W(w), n) == expected


def test_exponent_sums_rejects_large_generator():
    with pytest.raises(ValueError):
        exponent_sums(W("xyz"), 2)


def test_text_format():
    assert format_word(()) == "1"
    assert parse_word(" x Y ") == (1, -2)
    assert parse_word("xX") == ()
    assert parse_word("ab") == (1, 2)
    assert parse_word("ax") == (1, 24)
    assert format_word((4, -1)) == "dA"
    with pytest.raises(ParseError) as err:
        parse_word("x#y")
    assert err.value.position == 1


@given(raw_words)
def test_free_reduce_idempotent_and_parity(raw):
    w = free_reduce(raw)
    assert free_reduce(w) == w
    assert len(w) % 2 == len(raw) % 2
    assert all(a != -b for a, b in zip(w, w[1:]))


@given(words, words, words)
def test_concat_group_laws(u, v, w):
    assert concat_words(concat_words(u, v), w) == concat_words(u, concat_words(v, w))
    assert concat_words(u, ()) == u == concat_words((), u)
    assert concat_words(u, invert_word(u)) == ()
    assert invert_word(invert_word(u)) == u


@given(words)
def test_cyclic_reduce_decomposition(w):
    core, c = cyclic_reduce(w)
    assert len(core) < 2 or core[0] != -core[-1]
    assert free_reduce(c + core + invert_word(c)) == w


@given(words, words)
def test_canonical_cyclic_form_invariance(w, g):
    c = canonical_cyclic_form(w)
    assert canonical_cyclic_form(invert_word(w)) == c
    assert canonical_cyclic_form(conjugate_word(w, g)) == c
    assert canonical_cyclic_form(c) == c


@given(words, words)
def test_exponent_sums_homomorphism(u, v):
    s = exponent_sums(concat_words(u, v), 3)
    assert s == [a + b for a, b in zip(exponent_sums(u, 3), exponent_sums(v, 3))]


@given(words, words)
def test_conjugator_to_finds_rotation(w, g):
    core, _ = cyclic_reduce(w)
    if not core:
        return
    target = core[1:] + core[:1]
    h = conjugator_to(conjugate_word(w, g), target)
    assert h is not None
    assert conjugate_word(conjugate_word(w, g), h) == target


@given(words)
def test_format_parse_roundtrip(w):
    assert parse_word(format_word(w)) == w
