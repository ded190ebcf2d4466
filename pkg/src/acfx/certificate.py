"""Replayable certificates.

Two kinds share one line-oriented text format:

* ``sac``: a start presentation, a move script and the claimed endpoint.
* ``consequence``: a word written as a product of conjugated relators.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Sequence

from .presentation import (
    Concat,
    Conjugate,
    Destabilize,
    Invert,
    Move,
    MoveError,
    Presentation,
    Stabilize,
    apply_move,
    canonical_key,
    format_presentation,
    parse_presentation,
)
from .words import (
    ABC,
    XYZ,
    ParseError,
    Word,
    alphabet_for,
    concat_words,
    format_word,
    free_reduce,
    invert_word,
    max_generator,
    parse_word,
    rotate,
)

VERSION = 1


class CertificateSyntaxError(ParseError):
    def __init__(self, message: str, line: int):
        self.line = line
        ValueError.__init__(self, f"line {line}: {message}")
        self.position = None


class VersionMismatch(CertificateSyntaxError):
    pass


class MoveInapplicable(Exception):
    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"step {step}: {reason}")


@dataclass(frozen=True)
class Certificate:
    start: Presentation
    moves: tuple[Move, ...]
    end: Presentation

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def essential_length(self) -> int:
        """Moves that change the presentation beyond rotating, inverting or
        conjugating a single relator."""
        return sum(isinstance(m, (Concat, Stabilize, Destabilize)) for m in self.moves)


@dataclass(frozen=True)
class Term:
    g: Word
    r: int  # 1-based relator index
    e: int  # +1 or -1


@dataclass(frozen=True)
class ConsequenceCertificate:
    relators: tuple[Word, ...]
    target: Word
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass
class Verdict:
    valid: bool
    step: int | None = None
    reason: str = ""
    residue: Word | None = None

    def line(self) -> str:
        if self.valid:
            return "VALID"
        if self.residue is not None:
            return f"INVALID residue={format_word(self.residue)}"
        return f"INVALID step={self.step} {self.reason}"


def replay(c: Certificate) -> Presentation:
    P = c.start
    for k, m in enumerate(c.moves, start=1):
        try:
            P = apply_move(P, m)
        except MoveError as exc:
            raise MoveInapplicable(k, f"{type(exc).__name__}: {exc}") from None
    return P


def verify_certificate(c: Certificate) -> Verdict:
    try:
        P = replay(c)
    except MoveInapplicable as exc:
        return Verdict(False, exc.step, exc.reason)
    if canonical_key(P) != canonical_key(c.end):
        return Verdict(False, len(c.moves) + 1, "endpoint differs from replay")
    return Verdict(True)


def term_word(relators: Sequence[Word], t: Term) -> Word:
    if not 1 <= t.r <= len(relators):
        raise IndexError(f"relator index {t.r} outside 1..{len(relators)}")
    if t.e not in (1, -1):
        raise ValueError("exponent must be +1 or -1")
    r = relators[t.r - 1]
    body = r if t.e == 1 else invert_word(r)
    return free_reduce((*t.g, *body, *invert_word(t.g)))


def product_of_terms(relators: Sequence[Word], terms: Sequence[Term]) -> Word:
    w: Word = ()
    for t in terms:
        w = concat_words(w, term_word(relators, t))
    return w


def verify_consequence(cc: ConsequenceCertificate) -> Verdict:
    # reported as target * product^-1, so that no terms leaves the target itself
    residue = concat_words(cc.target, invert_word(product_of_terms(cc.relators, cc.terms)))
    if residue:
        return Verdict(False, reason="residue", residue=residue)
    return Verdict(True)


# Term-list algebra: products of consequences are consequences.

def invert_terms(terms: Sequence[Term]) -> list[Term]:
    return [Term(t.g, t.r, -t.e) for t in reversed(terms)]


def conjugate_terms(terms: Sequence[Term], g: Word) -> list[Term]:
    return [Term(free_reduce((*g, *t.g)), t.r, t.e) for t in terms]


def find_consequence(
    relators: Sequence[Word], target: Word, max_nodes: int = 200_000
) -> list[Term] | None:
    """Express ``target`` as a product of conjugated relators, or give up.

    Best-first search on word length: a rotated relator (or inverse) is
    inserted at some position of the current word until it reduces away.
    Inserting ``rho`` before suffix ``s`` multiplies on the right by
    ``s^-1 rho s``, which is how terms are recorded.
    """
    pieces = []
    for idx, r in enumerate(relators, start=1):
        for e in (1, -1):
            body = r if e == 1 else invert_word(r)
            for k in range(len(body)):
                # rotate(body, k) = u^-1 body u with u = body[:k]
                pieces.append((rotate(body, k), idx, e, tuple(body[:k])))
    start = free_reduce(target)
    seen = {start: None}
    heap = [(len(start), 0, start)]
    counter = 0
    while heap and len(seen) <= max_nodes:
        _, _, w = heapq.heappop(heap)
        if not w:
            break
        for p in range(len(w) + 1):
            s = w[p:]
            for rho, idx, e, u in pieces:
                nw = free_reduce(w[:p] + rho + s)
                if nw in seen:
                    continue
                gamma = free_reduce(invert_word(s) + invert_word(u))
                seen[nw] = (w, Term(gamma, idx, e))
                counter += 1
                heapq.heappush(heap, (len(nw), counter, nw))
    if () not in seen:
        return None
    # target . t1 ... tk = 1, so target = tk^-1 ... t1^-1
    appended = []
    w = ()
    while seen[w] is not None:
        prev, t = seen[w]
        appended.append(t)
        w = prev
    appended.reverse()
    return invert_terms(appended)


# Text format

_MOVE_PARAMS = {
    "concat": ("i", "j"),
    "invert": ("i",),
    "conjugate": ("i", "g"),
    "stabilize": ("g",),
    "destabilize": ("i",),
}


def _format_move(m: Move, gen_count: int) -> str:
    alphabet = alphabet_for(gen_count)
    if isinstance(m, Concat):
        return f"move: concat i={m.i} j={m.j}"
    if isinstance(m, Invert):
        return f"move: invert i={m.i}"
    if isinstance(m, Conjugate):
        return f"move: conjugate i={m.i} g={format_word(m.g, alphabet)}"
    if isinstance(m, Stabilize):
        return f"move: stabilize g={format_word(m.g, alphabet)}"
    if isinstance(m, Destabilize):
        return f"move: destabilize i={m.i}"
    raise TypeError(f"not a move: {m!r}")


def _gen_count_after(m: Move, n: int) -> int:
    if isinstance(m, Stabilize):
        return n + 1
    if isinstance(m, Destabilize):
        return n - 1
    return n


def serialize_certificate(c: Certificate) -> str:
    lines = ["acfx v1 kind=sac", f"start: {format_presentation(c.start)}"]
    n = c.start.gen_count
    for m in c.moves:
        lines.append(_format_move(m, n))
        n = _gen_count_after(m, n)
    lines.append(f"end: {format_presentation(c.end)}")
    return "\n".join(lines) + "\n"


def _consequence_alphabet(words: Sequence[Word]) -> str:
    return XYZ if max((max_generator(w) for w in words), default=0) <= 3 else ABC


def serialize_consequence(cc: ConsequenceCertificate) -> str:
    alphabet = _consequence_alphabet([*cc.relators, cc.target, *(t.g for t in cc.terms)])
    lines = [
        "acfx v1 kind=consequence",
        "relators: " + ", ".join(format_word(r, alphabet) for r in cc.relators),
        f"target: {format_word(cc.target, alphabet)}",
    ]
    for t in cc.terms:
        lines.append(f"term: g={format_word(t.g, alphabet)} r={t.r} e={'+1' if t.e > 0 else '-1'}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


_HEADER = re.compile(r"acfx v(\d+) kind=(\S+)")


def _lines(text: str) -> list[str]:
    return [line.rstrip() for line in text.splitlines()]


def _header(lines: list[str]) -> str:
    if not lines:
        raise CertificateSyntaxError("empty certificate", 1)
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise CertificateSyntaxError("bad header", 1)
    if int(m.group(1)) != VERSION:
        raise VersionMismatch(f"unsupported version v{m.group(1)}", 1)
    if m.group(2) not in ("sac", "consequence"):
        raise CertificateSyntaxError(f"unknown kind {m.group(2)!r}", 1)
    return m.group(2)


def _field(line: str, key: str, lineno: int) -> str:
    prefix = key + ":"
    if not line.startswith(prefix):
        raise CertificateSyntaxError(f"expected '{prefix}'", lineno)
    return line[len(prefix):].strip()


def _params(text: str, names: tuple[str, ...], lineno: int) -> dict[str, str]:
    parts = text.split(" ")
    if len(parts) != len(names):
        raise CertificateSyntaxError(f"expected parameters {' '.join(names)}", lineno)
    out = {}
    for part, name in zip(parts, names):
        key, sep, value = part.partition("=")
        if key != name or not sep or not value:
            raise CertificateSyntaxError(f"expected {name}=<value>", lineno)
        out[name] = value
    return out


def _index(value: str, lineno: int) -> int:
    if not value.isdigit() or value.startswith("0"):
        raise CertificateSyntaxError(f"bad index {value!r}", lineno)
    return int(value)


def _word(value: str, alphabet: str, lineno: int) -> Word:
    try:
        return parse_word(value, alphabet)
    except ParseError as exc:
        raise CertificateSyntaxError(str(exc), lineno) from None


def _parse_move(text: str, gen_count: int, lineno: int) -> Move:
    kind, _, rest = text.partition(" ")
    if kind not in _MOVE_PARAMS:
        raise CertificateSyntaxError(f"unknown move {kind!r}", lineno)
    p = _params(rest, _MOVE_PARAMS[kind], lineno)
    alphabet = alphabet_for(gen_count)[:gen_count]
    if kind == "concat":
        return Concat(_index(p["i"], lineno), _index(p["j"], lineno))
    if kind == "invert":
        return Invert(_index(p["i"], lineno))
    if kind == "conjugate":
        return Conjugate(_index(p["i"], lineno), _word(p["g"], alphabet, lineno))
    if kind == "stabilize":
        return Stabilize(_word(p["g"], alphabet, lineno))
    return Destabilize(_index(p["i"], lineno))


def _presentation(value: str, lineno: int) -> Presentation:
    try:
        return parse_presentation(value)
    except (ParseError, ValueError) as exc:
        raise CertificateSyntaxError(str(exc), lineno) from None


def parse_certificate(text: str) -> Certificate | ConsequenceCertificate:
    lines = _lines(text)
    kind = _header(lines)
    if kind == "sac":
        return _parse_sac(lines)
    return _parse_consequence(lines)


def _parse_sac(lines: list[str]) -> Certificate:
    if len(lines) < 3:
        raise CertificateSyntaxError("truncated certificate", len(lines) + 1)
    start = _presentation(_field(lines[1], "start", 2), 2)
    n = start.gen_count
    moves = []
    for lineno, line in enumerate(lines[2:-1], start=3):
        m = _parse_move(_field(line, "move", lineno), n, lineno)
        moves.append(m)
        n = _gen_count_after(m, n)
    end = _presentation(_field(lines[-1], "end", len(lines)), len(lines))
    return Certificate(start, tuple(moves), end)


def _parse_consequence(lines: list[str]) -> ConsequenceCertificate:
    if len(lines) < 3:
        raise CertificateSyntaxError("truncated certificate", len(lines) + 1)
    rel_text = _field(lines[1], "relators", 2)
    target_text = _field(lines[2], "target", 3)
    raw_terms = []
    for lineno, line in enumerate(lines[3:], start=4):
        p = _params(_field(line, "term", lineno), ("g", "r", "e"), lineno)
        if p["e"] not in ("+1", "-1"):
            raise CertificateSyntaxError("exponent must be +1 or -1", lineno)
        raw_terms.append((p, lineno))
    spelled = rel_text + target_text + "".join(p["g"] for p, _ in raw_terms)
    alphabet = XYZ if {c for c in spelled.lower() if c.isalpha()} <= set(XYZ) else ABC
    relators = []
    if rel_text:
        for piece in rel_text.split(","):
            if not piece.strip():
                raise CertificateSyntaxError("empty relator", 2)
            relators.append(_word(piece, alphabet, 2))
    target = _word(target_text, alphabet, 3)
    terms = [
        Term(_word(p["g"], alphabet, lineno), _index(p["r"], lineno), int(p["e"]))
        for p, lineno in raw_terms
    ]
    return ConsequenceCertificate(tuple(relators), target, tuple(terms))
