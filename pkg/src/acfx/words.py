"""Free-group words.

A word is a tuple of nonzero ints: ``k`` is the generator ``x_k`` and ``-k``
its inverse.  Every function here is pure and returns freely reduced tuples.

Letters are totally ordered generator-major with the positive letter first
(x1 < X1 < x2 < X2 < ...).  Words compare by length, then lexicographically.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()

XYZ = "xyz"
ABC = string.ascii_lowercase


class ParseError(ValueError):
    """Malformed text input; ``position`` is a 0-based offset (or None)."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)


def letter_code(letter: int) -> int:
    # x1 -> 0, X1 -> 1, x2 -> 2, ...; inversion is ``code ^ 1``
    return 2 * abs(letter) - (2 if letter > 0 else 1)


def code_letter(code: int) -> int:
    g = code // 2 + 1
    return -g if code & 1 else g


def word_key(w: Sequence[int]) -> tuple:
    """Sort key realising the word order (length first, then letters)."""
    return (len(w), tuple(letter_code(l) for l in w))


def free_reduce(raw: Iterable[int]) -> Word:
    out: list[int] = []
    for l in raw:
        if l == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-l for l in reversed(w))


def concat_words(u: Sequence[int], v: Sequence[int]) -> Word:
    # both inputs reduced: only the seam can cancel
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return tuple(u[: len(u) - i]) + tuple(v[i:])


def conjugate_word(w: Sequence[int], g: Sequence[int]) -> Word:
    """Return ``g w g^-1`` reduced."""
    if not w:
        return EMPTY
    return free_reduce((*g, *w, *invert_word(g)))


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``conjugator . core . conjugator^-1``.

    >>> cyclic_reduce((-1, -1, 2, 1, 1))
    ((2,), (-1, -1))
    """
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1]), tuple(w[:i])


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def _min_rotation(codes: tuple[int, ...]) -> tuple[int, ...]:
    n = len(codes)
    doubled = codes + codes
    return min(doubled[k : k + n] for k in range(n))


def cyclic_codes(core: Sequence[int]) -> tuple[int, ...]:
    """Canonical cyclic form of a cyclically reduced word, as letter codes."""
    if not core:
        return ()
    codes = tuple(letter_code(l) for l in core)
    inv = tuple(c ^ 1 for c in reversed(codes))
    return min(_min_rotation(codes), _min_rotation(inv))


def canonical_cyclic_form(w: Sequence[int]) -> Word:
    """Minimal word over all rotations of the cyclic core and of its inverse."""
    core, _ = cyclic_reduce(free_reduce(w))
    return tuple(code_letter(c) for c in cyclic_codes(core))


def rotate(w: Sequence[int], k: int) -> Word:
    if not w:
        return EMPTY
    k %= len(w)
    return tuple(w[k:]) + tuple(w[:k])


def conjugator_to(src: Sequence[int], dst: Sequence[int]) -> Word | None:
    """Find ``h`` with ``h src h^-1 == dst`` when ``dst`` is a rotation of
    the cyclic core of ``src``; None otherwise."""
    core, c = cyclic_reduce(src)
    if len(core) != len(dst):
        return None
    if not core:
        return invert_word(c)
    for t in range(len(core)):
        if core[t:] + core[:t] == tuple(dst):
            return free_reduce(invert_word(core[:t]) + invert_word(c))
    return None


def exponent_sums(w: Sequence[int], n: int) -> list[int]:
    sums = [0] * n
    for l in w:
        g = abs(l)
        if g > n:
            raise ValueError(f"generator {g} exceeds generator count {n}")
        sums[g - 1] += 1 if l > 0 else -1
    return sums


def max_generator(w: Sequence[int]) -> int:
    return max((abs(l) for l in w), default=0)


def alphabet_for(gen_count: int) -> str:
    """Display alphabet: x,y,z up to three generators, a..z beyond."""
    return XYZ if gen_count <= 3 else ABC


def parse_word(text: str, alphabet: str | None = None, offset: int = 0) -> Word:
    """Parse letters (lowercase generator, uppercase inverse); "1" is empty.

    Without an explicit alphabet, words spelled only in x/y/z use x=x1,
    y=x2, z=x3, and anything else reads a..z positionally.
    """
    stripped = "".join(text.split())
    if alphabet is None:
        alphabet = XYZ if set(stripped.lower()) <= set(XYZ) else ABC
    if stripped == "1":
        return EMPTY
    letters = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        k = alphabet.find(ch.lower())
        if k < 0 or not ch.isalpha() or not ch.isascii():
            raise ParseError(f"unexpected character {ch!r}", offset + pos)
        letters.append(k + 1 if ch.islower() else -(k + 1))
    return free_reduce(letters)


def format_word(w: Sequence[int], alphabet: str | None = None) -> str:
    if not w:
        return "1"
    if alphabet is None:
        alphabet = alphabet_for(max_generator(w))
    if max_generator(w) > len(alphabet):
        raise ValueError(f"generator {max_generator(w)} has no display letter")
    return "".join(
        alphabet[l - 1] if l > 0 else alphabet[-l - 1].upper() for l in w
    )
