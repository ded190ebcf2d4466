"""Randomized invariant battery over move sequences, and scramble recovery.

Both report plain text without timings so repeated runs can be compared
byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .certificate import Certificate, replay, verify_certificate
from .oracle import FiniteTarget, count_homomorphisms
from .presentation import (
    Concat,
    Conjugate,
    Destabilize,
    Invert,
    Move,
    MoveError,
    Presentation,
    Stabilize,
    abel_det,
    apply_move,
    apply_moves,
    canonical_key,
    fig5_presentation,
    gen_gpn,
    gen_trivial,
    inverse_move,
)
from .search import SearchConfig, scramble, search_trivialization
from .words import free_reduce

CHECKS = ("abel_det", "homs_S3", "reduced", "roundtrip")


@dataclass
class BatteryResult:
    name: str
    cases: int = 0
    moves: int = 0
    failures: dict = field(default_factory=lambda: {c: 0 for c in CHECKS})

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def line(self) -> str:
        fails = " ".join(f"{c}={self.failures[c]}" for c in CHECKS)
        status = "PASS" if self.ok else "FAIL"
        return f"{status} start={self.name} cases={self.cases} moves={self.moves} failures: {fails}"


def _random_word(rng: random.Random, n: int, max_len: int) -> tuple[int, ...]:
    if n == 0:
        return ()
    raw = [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, max_len))]
    return free_reduce(raw)


def random_move(rng: random.Random, P: Presentation) -> Move:
    """A move of any kind with random parameters; may be inapplicable."""
    r = len(P.relators)
    kind = rng.choice(("concat", "concat", "invert", "conjugate", "conjugate", "stabilize", "destabilize"))
    if kind == "concat" and r >= 2:
        i, j = rng.sample(range(1, r + 1), 2)
        return Concat(i, j)
    if kind == "invert" and r:
        return Invert(rng.randint(1, r))
    if kind == "conjugate" and r:
        return Conjugate(rng.randint(1, r), _random_word(rng, P.gen_count, 3))
    if kind == "destabilize" and r:
        return Destabilize(rng.randint(1, r))
    return Stabilize(_random_word(rng, P.gen_count, 2))


def run_battery(
    name: str,
    start: Presentation,
    cases: int,
    seed: int,
    max_steps: int = 20,
    max_len: int = 40,
    max_gens: int | None = None,
    target: FiniteTarget | None = None,
) -> BatteryResult:
    """Apply ``cases`` random applicable sequences (1..max_steps moves) from
    ``start`` and check the move invariants at every step."""
    if max_gens is None:
        max_gens = start.gen_count + 1
    target = target or FiniteTarget.symmetric(3)
    rng = random.Random(seed)
    res = BatteryResult(name)
    det0 = abs(abel_det(start))
    homs0 = count_homomorphisms(start, target)
    for _ in range(cases):
        res.cases += 1
        P = start
        for _ in range(rng.randint(1, max_steps)):
            for _attempt in range(50):
                m = random_move(rng, P)
                try:
                    Q = apply_move(P, m)
                except MoveError:
                    continue
                if Q.max_relator_length <= max_len and Q.gen_count <= max_gens:
                    break
            else:
                break
            res.moves += 1
            if any(free_reduce(r) != r for r in Q.relators):
                res.failures["reduced"] += 1
            if abs(abel_det(Q)) != det0:
                res.failures["abel_det"] += 1
            back = apply_moves(Q, inverse_move(P, m))
            if back != P and canonical_key(back) != canonical_key(P):
                res.failures["roundtrip"] += 1
            P = Q
        if count_homomorphisms(P, target) != homs0:
            res.failures["homs_S3"] += 1
    return res


def standard_starts() -> list[tuple[str, Presentation]]:
    return [("T3", gen_trivial(3)), ("GP2", gen_gpn(2)), ("fig5", fig5_presentation())]


def run_standard_battery(cases: int, seed: int) -> list[BatteryResult]:
    return [
        run_battery(name, P, cases, seed + k)
        for k, (name, P) in enumerate(standard_starts())
    ]


@dataclass
class RecoveryResult:
    seed: int
    k: int
    scrambled: Presentation
    status: str
    depth: int | None
    moves: int | None
    valid: bool
    replay_matches: bool

    @property
    def ok(self) -> bool:
        return self.status == "FOUND" and self.valid and self.replay_matches and self.depth <= self.k

    def line(self) -> str:
        return (
            f"{'PASS' if self.ok else 'FAIL'} seed={self.seed} k={self.k} start={self.scrambled} "
            f"outcome={self.status} depth={self.depth} moves={self.moves} verify={'VALID' if self.valid else 'INVALID'}"
        )


def scramble_recovery(
    instances: int = 100, seed: int = 0, max_k: int = 5, max_len: int = 24, max_gens: int = 3
) -> list[RecoveryResult]:
    """Scramble T2 with 1..``max_k`` moves, then search back to a trivial
    presentation with BFS."""
    out = []
    for s in range(seed, seed + instances):
        k = 1 + s % max_k
        S, moves = scramble(gen_trivial(2), k, s, max_len, max_gens)
        scripted = Certificate(gen_trivial(2), tuple(moves), S)
        replay_ok = replay(scripted) == S
        res = search_trivialization(S, SearchConfig(max_len=max_len, max_gens=max_gens))
        cert = res.certificate
        valid = cert is not None and verify_certificate(cert).valid
        out.append(RecoveryResult(s, k, S, res.status, res.depth, len(cert) if cert else None,
                                  valid, replay_ok))
    return out
