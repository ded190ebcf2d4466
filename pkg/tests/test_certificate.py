import time
from dataclasses import replace
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acfx.certificate import (
    Certificate,
    CertificateSyntaxError,
    ConsequenceCertificate,
    Term,
    VersionMismatch,
    conjugate_terms,
    find_consequence,
    invert_terms,
    parse_certificate,
    product_of_terms,
    replay,
    serialize_certificate,
    serialize_consequence,
    verify_certificate,
    verify_consequence,
)
from acfx.presentation import (
    Concat,
    Conjugate,
    Destabilize,
    Invert,
    Stabilize,
    canonical_key,
    fig5_presentation,
    gen_gpn,
    gen_trivial,
    parse_presentation,
    trivial_key,
)
from acfx.search import scramble
from acfx.words import conjugate_word, free_reduce, invert_word
from conftest import FIXTURES, W, words


def P(text):
    return parse_presentation(text)


def bundled(name):
    return resources.files("acfx").joinpath(f"data/{name}.acfx").read_text()


class TestReplay:
    def test_single_concat(self):
        c = Certificate(P("x,y | x, y"), (Concat(1, 2),), P("x,y | xy, y"))
        assert verify_certificate(c).line() == "VALID"

    def test_empty(self):
        assert verify_certificate(Certificate(gen_gpn(2), (), gen_gpn(2))).valid

    def test_endpoint_compared_up_to_class(self):
        c = Certificate(P("x,y | x, y"), (Concat(1, 2),), P("x,y | y, YX"))
        assert verify_certificate(c).valid

    def test_inapplicable_step(self):
        c = Certificate(P("x,y | x, y"), (Invert(1), Concat(2, 2)), P("x,y | X, y"))
        v = verify_certificate(c)
        assert not v.valid and v.step == 2
        assert v.line().startswith("INVALID step=2 ConcatSelf")

    def test_wrong_endpoint(self):
        c = Certificate(P("x,y | x, y"), (Concat(1, 2),), P("x,y | x, y"))
        v = verify_certificate(c)
        assert v.line() == "INVALID step=2 endpoint differs from replay"

    def test_essential_length(self):
        c = Certificate(gen_trivial(1), (Stabilize(()), Invert(2), Conjugate(1, W("y")), Concat(1, 2),
                                         Destabilize(2)), gen_trivial(1))
        assert len(c) == 5 and c.essential_length == 3

    def test_tamper_detected(self):
        c = parse_certificate((FIXTURES / "scramble_t2.acfx").read_text())
        assert verify_certificate(c).valid
        k = next(i for i, m in enumerate(c.moves) if isinstance(m, Concat))
        m = c.moves[k]
        bad = replace(c, moves=c.moves[:k] + (Concat(m.j, m.i),) + c.moves[k + 1:])
        v = verify_certificate(bad)
        assert not v.valid and v.step > k

    def test_scramble_is_a_certificate(self):
        S, moves = scramble(gen_gpn(2), 10, seed=4)
        assert replay(Certificate(gen_gpn(2), moves, S)) == S


class TestConsequence:
    def test_relator_itself(self):
        cc = ConsequenceCertificate((W("x"),), W("x"), (Term((), 1, 1),))
        assert verify_consequence(cc).valid

    def test_conjugated(self):
        cc = ConsequenceCertificate((W("x"),), W("yxY"), (Term(W("y"), 1, 1),))
        assert verify_consequence(cc).valid

    def test_empty_terms_leave_residue(self):
        v = verify_consequence(ConsequenceCertificate((W("x"),), W("x"), ()))
        assert v.line() == "INVALID residue=x"

    def test_bad_index(self):
        with pytest.raises(IndexError):
            verify_consequence(ConsequenceCertificate((W("x"),), W("x"), (Term((), 2, 1),)))

    @pytest.mark.parametrize("name", ["fig5_braid", "fig5_power"])
    def test_bundled_valid_and_fast(self, name):
        cc = parse_certificate(bundled(name))
        assert cc.relators == fig5_presentation().relators
        t0 = time.perf_counter()
        v = verify_consequence(cc)
        assert time.perf_counter() - t0 < 0.01
        assert v.valid

    def test_bundled_targets(self):
        assert parse_certificate(bundled("fig5_braid")).target == gen_gpn(2).relators[0]
        assert parse_certificate(bundled("fig5_power")).target == gen_gpn(2).relators[1]

    @given(st.lists(st.tuples(words, st.integers(1, 2), st.sampled_from([1, -1])), max_size=4), words)
    def test_term_algebra(self, raw, g):
        rels = (W("xxyXyXY"), W("YYXyXyx"))
        terms = [Term(*t) for t in raw]
        w = product_of_terms(rels, terms)
        assert product_of_terms(rels, invert_terms(terms)) == invert_word(w)
        assert product_of_terms(rels, conjugate_terms(terms, g)) == conjugate_word(w, g)

    def test_find_consequence(self):
        rels = (W("xyX"), W("y"))
        terms = find_consequence(rels, W("xyyX"))
        assert verify_consequence(ConsequenceCertificate(rels, W("xyyX"), terms)).valid

    def test_find_consequence_braid(self):
        rels = fig5_presentation().relators
        target = gen_gpn(2).relators[0]
        terms = find_consequence(rels, target)
        assert terms is not None
        assert verify_consequence(ConsequenceCertificate(rels, target, terms)).valid

    def test_find_consequence_gives_up(self):
        # x is not a consequence of xx
        assert find_consequence((W("xx"),), W("x"), max_nodes=100) is None


class TestText:
    @pytest.mark.parametrize("name", ["scramble_t2.acfx", "scramble_t3.acfx"])
    def test_fixture_roundtrip(self, name):
        text = (FIXTURES / name).read_text()
        c = parse_certificate(text)
        assert serialize_certificate(c) == text
        assert verify_certificate(c).valid
        assert canonical_key(c.end) == trivial_key(c.end.gen_count)

    @pytest.mark.parametrize("name", ["fig5_braid", "fig5_power"])
    def test_bundled_roundtrip(self, name):
        text = bundled(name)
        assert serialize_consequence(parse_certificate(text)) == text

    def test_alphabet_tracks_generator_count(self):
        start = gen_trivial(3)
        moves = (Stabilize(W("xz")), Conjugate(4, W("ab")), Destabilize(4), Conjugate(1, W("z")))
        c = Certificate(start, moves, replay(Certificate(start, moves, start)))
        text = serialize_certificate(c)
        assert "move: stabilize g=xz" in text
        assert "move: conjugate i=4 g=ab" in text
        assert "move: conjugate i=1 g=z" in text
        assert parse_certificate(text) == c

    def test_consequence_letters(self):
        cc = ConsequenceCertificate((W("ab"), W("d")), W("ab"), (Term(W("d"), 1, 1),))
        text = serialize_consequence(cc)
        assert "relators: ab, d" in text
        assert parse_certificate(text) == cc

    def test_unknown_move(self):
        text = "acfx v1 kind=sac\nstart: x | x\nmove: twist i=1\nend: x | x\n"
        with pytest.raises(CertificateSyntaxError) as err:
            parse_certificate(text)
        assert err.value.line == 3

    def test_version(self):
        with pytest.raises(VersionMismatch):
            parse_certificate("acfx v2 kind=sac\nstart: x | x\nend: x | x\n")

    @pytest.mark.parametrize("text", [
        "",
        "acfx v1 kind=other\n",
        "acfx v1 kind=sac\nstart: x | x\n",
        "acfx v1 kind=sac\nstart: x | x\nmove: concat i=0 j=1\nend: x | x\n",
        "acfx v1 kind=sac\nstart: x | x\nmove: concat i=1\nend: x | x\n",
        "acfx v1 kind=consequence\nrelators: x\ntarget: x\nterm: g=1 r=1 e=2\n",
        "acfx v1 kind=consequence\nrelators: x,,y\ntarget: x\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(CertificateSyntaxError):
            parse_certificate(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10))
def test_scramble_certificate_roundtrip(seed, k):
    S, moves = scramble(gen_trivial(2), k, seed, max_len=14, max_gens=4)
    c = Certificate(gen_trivial(2), tuple(moves), S)
    assert parse_certificate(serialize_certificate(c)) == c
    assert verify_certificate(c).valid
    assert all(free_reduce(r) == r for r in S.relators)
