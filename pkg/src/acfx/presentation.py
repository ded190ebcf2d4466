"""Balanced presentations and stable Andrews-Curtis moves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .words import (
    ABC,
    EMPTY,
    XYZ,
    ParseError,
    Word,
    alphabet_for,
    code_letter,
    concat_words,
    conjugate_word,
    cyclic_codes,
    cyclic_reduce,
    exponent_sums,
    format_word,
    free_reduce,
    invert_word,
    max_generator,
    parse_word,
)

# relabeling search is exhaustive up to this many generators
MAX_RELABEL_GENS = 6


class MoveError(ValueError):
    """A move is not applicable to a presentation."""


class IndexOutOfRange(MoveError):
    pass


class ConcatSelf(MoveError):
    pass


class DestabilizeInapplicable(MoveError):
    pass


class StabilizeBadConjugator(MoveError):
    pass


class NotBalanced(ValueError):
    pass


class TooManyGenerators(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    gen_count: int
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        if self.gen_count < 0:
            raise ValueError("negative generator count")
        rels = tuple(tuple(r) for r in self.relators)
        n = self.gen_count
        for r in rels:
            if not r:
                continue
            if max(r) > n or -min(r) > n or 0 in r:
                raise ValueError(f"relator {r} uses a generator outside 1..{n}")
            if any(map(int.__eq__, r, map(int.__neg__, r[1:]))):
                raise ValueError(f"relator {r} is not freely reduced")
        object.__setattr__(self, "relators", rels)

    @property
    def balanced(self) -> bool:
        return len(self.relators) == self.gen_count

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def __str__(self) -> str:
        return format_presentation(self)


# Moves.  Relator indices are 1-based, as in the certificate format.

@dataclass(frozen=True)
class Concat:
    i: int
    j: int


@dataclass(frozen=True)
class Invert:
    i: int


@dataclass(frozen=True)
class Conjugate:
    i: int
    g: Word


@dataclass(frozen=True)
class Stabilize:
    g: Word = EMPTY


@dataclass(frozen=True)
class Destabilize:
    i: int


Move = Union[Concat, Invert, Conjugate, Stabilize, Destabilize]


def _check_index(P: Presentation, i: int) -> None:
    if not 1 <= i <= len(P.relators):
        raise IndexOutOfRange(f"relator index {i} outside 1..{len(P.relators)}")


def _replace(P: Presentation, i: int, r: Word) -> Presentation:
    rels = list(P.relators)
    rels[i - 1] = r
    return Presentation(P.gen_count, tuple(rels))


def destabilize_parts(P: Presentation, i: int) -> tuple[int, Word]:
    """Locate the cancelling pair for ``Destabilize(i)``.

    Returns ``(k, g)`` such that relator ``i`` is, up to rotation and
    inversion, ``x_k g`` and ``x_k`` occurs nowhere else.  When several
    generators qualify the largest is taken, which makes
    ``Destabilize`` an exact inverse of ``Stabilize``.
    """
    _check_index(P, i)
    counts = [0] * (P.gen_count + 1)
    for r in P.relators:
        for l in r:
            counts[abs(l)] += 1
    r = P.relators[i - 1]
    candidates = [abs(l) for l in r if counts[abs(l)] == 1]
    if not candidates:
        raise DestabilizeInapplicable(
            f"relator {i} has no generator occurring exactly once overall"
        )
    k = max(candidates)
    if k not in r:
        r = invert_word(r)
    p = r.index(k)
    rotated = r[p:] + r[:p]
    return k, rotated[1:]


def _drop_generator(w: Word, k: int) -> Word:
    return tuple(l if abs(l) < k else (l - 1 if l > 0 else l + 1) for l in w)


def apply_move(P: Presentation, m: Move) -> Presentation:
    if isinstance(m, Concat):
        _check_index(P, m.i)
        _check_index(P, m.j)
        if m.i == m.j:
            raise ConcatSelf(f"cannot concatenate relator {m.i} with itself")
        return _replace(P, m.i, concat_words(P.relators[m.i - 1], P.relators[m.j - 1]))
    if isinstance(m, Invert):
        _check_index(P, m.i)
        return _replace(P, m.i, invert_word(P.relators[m.i - 1]))
    if isinstance(m, Conjugate):
        _check_index(P, m.i)
        g = free_reduce(m.g)
        if max_generator(g) > P.gen_count:
            raise IndexOutOfRange(f"conjugator uses a generator beyond {P.gen_count}")
        return _replace(P, m.i, conjugate_word(P.relators[m.i - 1], g))
    if isinstance(m, Stabilize):
        g = free_reduce(m.g)
        if max_generator(g) > P.gen_count:
            raise StabilizeBadConjugator(
                f"stabilizing word must avoid the new generator x{P.gen_count + 1}"
            )
        n = P.gen_count + 1
        return Presentation(n, P.relators + ((n,) + g,))
    if isinstance(m, Destabilize):
        k, _ = destabilize_parts(P, m.i)
        rels = tuple(
            _drop_generator(r, k) for idx, r in enumerate(P.relators) if idx != m.i - 1
        )
        return Presentation(P.gen_count - 1, rels)
    raise TypeError(f"not a move: {m!r}")


def apply_moves(P: Presentation, moves: Sequence[Move]) -> Presentation:
    for m in moves:
        P = apply_move(P, m)
    return P


def inverse_move(P: Presentation, m: Move) -> list[Move]:
    """Moves undoing ``m`` on the presentation ``apply_move(P, m)``.

    Always a list.  ``Concat(i, j)`` is undone by
    ``Invert(j), Concat(i, j), Invert(j)``; all other kinds invert in one move.
    """
    if isinstance(m, Concat):
        apply_move(P, m)
        return [Invert(m.j), Concat(m.i, m.j), Invert(m.j)]
    if isinstance(m, Invert):
        _check_index(P, m.i)
        return [Invert(m.i)]
    if isinstance(m, Conjugate):
        apply_move(P, m)
        return [Conjugate(m.i, invert_word(free_reduce(m.g)))]
    if isinstance(m, Stabilize):
        apply_move(P, m)
        return [Destabilize(len(P.relators) + 1)]
    if isinstance(m, Destabilize):
        k, g = destabilize_parts(P, m.i)
        return [Stabilize(_drop_generator(g, k))]
    raise TypeError(f"not a move: {m!r}")


def candidate_moves(P: Presentation, max_gens: int | None = None) -> Iterator[Move]:
    """Every move ``neighbors`` tries from ``P``, in a fixed order."""
    r = len(P.relators)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            if i != j:
                yield Concat(i, j)
    for i in range(1, r + 1):
        yield Invert(i)
    for i in range(1, r + 1):
        for g in range(1, P.gen_count + 1):
            yield Conjugate(i, (g,))
            yield Conjugate(i, (-g,))
    if max_gens is None or P.gen_count < max_gens:
        yield Stabilize(EMPTY)
    for i in range(1, r + 1):
        yield Destabilize(i)


def neighbors(
    P: Presentation, max_len: int, max_gens: int
) -> list[tuple[Move, Presentation]]:
    """All applicable search moves whose result respects the caps.

    Conjugators are single letters and stabilization uses the empty word.
    """
    out = []
    for m in candidate_moves(P, max_gens):
        try:
            Q = apply_move(P, m)
        except MoveError:
            continue
        if Q.max_relator_length <= max_len and Q.gen_count <= max_gens:
            out.append((m, Q))
    return out


# Canonical forms

def _relabel(w: Word, perm: Sequence[int]) -> Word:
    return tuple(perm[l - 1] if l > 0 else -perm[-l - 1] for l in w)


def _keyed(rels: Sequence[Word], perm: Sequence[int]) -> list[tuple[int, tuple[int, ...], int]]:
    out = []
    for idx, r in enumerate(rels):
        core, _ = cyclic_reduce(_relabel(r, perm))
        c = cyclic_codes(core)
        out.append((len(c), c, idx))
    out.sort()
    return out


def _perms(n: int) -> Iterator[tuple[int, ...]]:
    if n <= MAX_RELABEL_GENS:
        return itertools.permutations(range(1, n + 1))
    return iter([tuple(range(1, n + 1))])


def canonical_key(P: Presentation) -> tuple:
    """Hashable canonical form: equal for presentations differing by relator
    rotation, inversion, conjugation, reordering or generator relabeling
    (relabeling only up to ``MAX_RELABEL_GENS`` generators)."""
    return key_of(P.gen_count, P.relators)


def key_of(gen_count: int, relators: Sequence[Word]) -> tuple:
    """``canonical_key`` for raw reduced relators, skipping validation."""
    best = None
    for perm in _perms(gen_count):
        cand = tuple((l, c) for l, c, _ in _keyed(relators, perm))
        if best is None or cand < best:
            best = cand
    return (gen_count, tuple(c for _, c in best or ()))


def trivial_key(n: int) -> tuple:
    return (n, tuple((2 * k,) for k in range(n)))


def presentation_from_key(key: tuple) -> Presentation:
    n, rels = key
    return Presentation(n, tuple(tuple(code_letter(c) for c in r) for r in rels))


def canonicalize(P: Presentation) -> Presentation:
    return presentation_from_key(canonical_key(P))


def canonicalize_with_map(P: Presentation) -> tuple[Presentation, tuple[int, ...], tuple[int, ...]]:
    """Canonical form plus how it was reached.

    Returns ``(R, perm, order)``: generator ``g`` of ``P`` is generator
    ``perm[g-1]`` of ``R`` and relator ``k`` of ``R`` comes from relator
    ``order[k]`` of ``P`` (0-based).
    """
    best = None
    for perm in _perms(P.gen_count):
        keyed = _keyed(P.relators, perm)
        cand = tuple((l, c) for l, c, _ in keyed)
        if best is None or cand < best[0]:
            best = (cand, perm, tuple(idx for _, _, idx in keyed))
    if best is None:
        return Presentation(P.gen_count), (), ()
    cand, perm, order = best
    R = presentation_from_key((P.gen_count, tuple(c for _, c in cand)))
    return R, tuple(perm), order


# Abelianization

def abelianization(P: Presentation) -> np.ndarray:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    m = np.zeros((len(P.relators), P.gen_count), dtype=np.int64)
    for i, r in enumerate(P.relators):
        m[i] = exponent_sums(r, P.gen_count)
    return m


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise NotBalanced("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for s in range(k + 1, n):
                if a[s][k] != 0:
                    a[k], a[s] = a[s], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def abel_det(P: Presentation) -> int:
    if not P.balanced:
        raise NotBalanced(
            f"{len(P.relators)} relators on {P.gen_count} generators"
        )
    return integer_det(abelianization(P).tolist())


# Named presentations

def gen_trivial(n: int) -> Presentation:
    if n < 0:
        raise ValueError("n must be non-negative")
    return Presentation(n, tuple((g,) for g in range(1, n + 1)))


def gen_gpn(n: int) -> Presentation:
    """``<x, y | xyx = yxy, x^(n+1) = y^n>`` written as relators."""
    if n < 0:
        raise ValueError("n must be non-negative")
    braid = (1, 2, 1, -2, -1, -2)
    return Presentation(2, (braid, (1,) * (n + 1) + (-2,) * n))


def fig5_presentation() -> Presentation:
    return Presentation(2, ((1, 1, 2, -1, 2, -1, -2), (-2, -2, -1, 2, -1, 2, 1)))


# Text format

def _segments(text: str, start: int, end: int) -> list[tuple[str, int]]:
    """Comma-separated pieces of ``text[start:end]`` with their offsets."""
    out = []
    pos = start
    for piece in text[start:end].split(","):
        out.append((piece, pos))
        pos += len(piece) + 1
    return out


def parse_presentation(text: str) -> Presentation:
    """Parse ``"x,y | xyxYXY, xxxYY"``; relators are freely reduced."""
    bar = text.find("|")
    if bar < 0:
        raise ParseError("missing '|'", len(text))
    if "|" in text[bar + 1 :]:
        raise ParseError("unexpected '|'", text.index("|", bar + 1))
    names = []
    if text[:bar].strip():
        for piece, pos in _segments(text, 0, bar):
            name = piece.strip()
            if len(name) != 1 or not name.isascii() or not name.islower():
                raise ParseError(f"bad generator name {piece.strip()!r}", pos)
            names.append(name)
    n = len(names)
    if n > len(ABC):
        raise TooManyGenerators(f"{n} generators; the text format allows {len(ABC)}")
    if "".join(names) == ABC[:n]:
        alphabet = ABC[:n]
    elif "".join(names) == XYZ[:n]:
        alphabet = XYZ[:n]
    else:
        raise ParseError("generators must be a, b, c, ... or x, y, z in order", 0)
    rels = []
    if text[bar + 1 :].strip():
        for piece, pos in _segments(text, bar + 1, len(text)):
            if not piece.strip():
                raise ParseError("empty relator", pos)
            rels.append(parse_word(piece, alphabet, offset=pos))
    return Presentation(n, tuple(rels))


def format_presentation(P: Presentation) -> str:
    if P.gen_count > len(ABC):
        raise TooManyGenerators(f"{P.gen_count} generators cannot be displayed")
    alphabet = alphabet_for(P.gen_count)
    gens = ",".join(alphabet[: P.gen_count])
    rels = ", ".join(format_word(r, alphabet) for r in P.relators)
    return f"{gens} | {rels}".strip()
