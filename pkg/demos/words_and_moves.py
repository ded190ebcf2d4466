"""
Words, presentations and moves
==============================

Free-group words are tuples of signed generator indices.  The text form
uses x, y, z with capitals for inverses.
"""

from acfx.presentation import Concat, Conjugate, Invert, apply_move, canonicalize, parse_presentation
from acfx.words import canonical_cyclic_form, cyclic_reduce, format_word, free_reduce, parse_word

w = free_reduce(parse_word("xyYXxyx") + parse_word("Xy"))
print("reduced:", format_word(w))

# conjugates share a cyclic core
core, conj = cyclic_reduce(parse_word("XXyxx"))
print("core:", format_word(core), "conjugator:", format_word(conj))
print("canonical form of Xyx:", format_word(canonical_cyclic_form(parse_word("Xyx"))))

P = parse_presentation("x,y | x, y")
for move in (Concat(1, 2), Invert(2), Conjugate(1, parse_word("y"))):
    P = apply_move(P, move)
    print(f"{move!s:40} -> {P}")

# canonicalize forgets rotation, inversion, conjugation and relabeling
print("canonical:", canonicalize(P))
