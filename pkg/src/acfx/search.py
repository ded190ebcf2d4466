"""Bounded search for stable Andrews-Curtis trivializations.

States are canonical keys (see ``presentation.canonical_key``), so rotating,
inverting or conjugating a relator, reordering relators and relabeling
generators cost nothing.  An edge is one step that changes the class:

* ``("slide", i, j, s, a, b)``: relator ``i`` of the canonical
  representative, rotated by ``a``, times relator ``j`` raised to ``s`` and
  rotated by ``b``.  This is a single ``Concat`` once both relators have
  been brought into that rotation.
* ``("stabilize",)`` and ``("destabilize", i)``.

A found path is replayed against the original presentation, emitting the
``Invert``/``Conjugate`` moves that line each relator up with its rotated
canonical form before the ``Concat``.  The search depth therefore equals the
certificate's ``essential_length``.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .certificate import Certificate, verify_certificate
from .presentation import (
    Concat,
    Conjugate,
    Destabilize,
    DestabilizeInapplicable,
    Invert,
    Move,
    Presentation,
    Stabilize,
    abel_det,
    apply_move,
    canonical_key,
    canonicalize_with_map,
    destabilize_parts,
    key_of,
    neighbors,
    presentation_from_key,
    trivial_key,
)
from .words import (
    EMPTY,
    Word,
    concat_words,
    conjugator_to,
    cyclic_reduce,
    invert_word,
    is_cyclically_reduced,
    rotate,
)

STRATEGIES = ("bfs", "beam", "iddfs")


@dataclass
class SearchConfig:
    max_len: int = 24
    max_gens: int = 3
    strategy: str = "bfs"
    beam_width: int = 1000
    node_budget: int = 1_000_000
    time_budget: float = float("inf")  # seconds
    workers: int = 1

    def validate(self, P: Presentation) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.node_budget < 1 or self.beam_width < 1 or self.workers < 1:
            raise ValueError("budgets, beam width and workers must be positive")
        if self.max_len < P.max_relator_length:
            raise ValueError(
                f"max_len {self.max_len} is below the longest start relator ({P.max_relator_length})"
            )
        if self.max_gens < P.gen_count:
            raise ValueError(f"max_gens {self.max_gens} is below the start generator count")


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    dedup_hits: int = 0
    discovered: int = 0
    frontier_peak: int = 0
    wall_time: float = 0.0


@dataclass
class SearchOutcome:
    status: str  # "FOUND" | "EXHAUSTED" | "BUDGET"
    certificate: Certificate | None = None
    depth: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    reason: str = ""

    def summary_line(self, with_time: bool = True) -> str:
        depth = "-" if self.depth is None else self.depth
        line = f"outcome={self.status} nodes={self.stats.discovered} depth={depth}"
        if with_time:
            line += f" time_ms={int(self.stats.wall_time * 1000)}"
        return line


# Class-level graph

def expand(key: tuple, max_len: int, max_gens: int) -> list[tuple[tuple, tuple]]:
    """Edges ``(edge, child_key)`` out of a canonical state, in fixed order.

    Children whose cyclically reduced relators exceed ``max_len`` or whose
    generator count exceeds ``max_gens`` are dropped.
    """
    R = presentation_from_key(key)
    n, rels = R.gen_count, list(R.relators)
    out = []
    for i, ri in enumerate(rels):
        for j, rj in enumerate(rels):
            if i == j:
                continue
            for s in (1, -1):
                body = rj if s == 1 else invert_word(rj)
                for a in range(max(1, len(ri))):
                    left = rotate(ri, a)
                    for b in range(max(1, len(body))):
                        w = concat_words(left, rotate(body, b))
                        core, _ = cyclic_reduce(w)
                        if len(core) > max_len:
                            continue
                        child = rels[:i] + [core] + rels[i + 1 :]
                        out.append((("slide", i, j, s, a, b), key_of(n, child)))
    if n < max_gens:
        out.append((("stabilize",), key_of(n + 1, rels + [(n + 1,)])))
    for i in range(len(rels)):
        try:
            Q = apply_move(R, Destabilize(i + 1))
        except DestabilizeInapplicable:
            continue
        out.append((("destabilize", i), canonical_key(Q)))
    return out


def _expand_batch(args):
    keys, max_len, max_gens = args
    return [expand(k, max_len, max_gens) for k in keys]


# Replay of class-level edges onto concrete presentations

def _retarget(P: Presentation, idx: int, target: Word) -> tuple[Presentation, list[Move]]:
    """Moves turning relator ``idx`` (1-based) into exactly ``target``."""
    src = P.relators[idx - 1]
    moves: list[Move] = []
    h = conjugator_to(src, target)
    if h is None:
        moves.append(Invert(idx))
        h = conjugator_to(invert_word(src), target)
        if h is None:
            raise AssertionError("relator is not a rotation of its canonical form")
    if h:
        moves.append(Conjugate(idx, h))
    for m in moves:
        P = apply_move(P, m)
    return P, moves


def _concrete_moves(P: Presentation, edge: tuple) -> tuple[Presentation, list[Move]]:
    R, perm, order = canonicalize_with_map(P)
    back = {new: old for old, new in enumerate(perm, start=1)}

    def unlabel(w: Word) -> Word:
        return tuple(back[l] if l > 0 else -back[-l] for l in w)

    kind = edge[0]
    if kind == "slide":
        _, i, j, s, a, b = edge
        ci, cj = order[i] + 1, order[j] + 1
        wi = unlabel(rotate(R.relators[i], a))
        body = R.relators[j] if s == 1 else invert_word(R.relators[j])
        wj = unlabel(rotate(body, b))
        P, moves = _retarget(P, ci, wi)
        P, more = _retarget(P, cj, wj)
        moves += more
        moves.append(Concat(ci, cj))
        return apply_move(P, Concat(ci, cj)), moves
    if kind == "stabilize":
        return apply_move(P, Stabilize(EMPTY)), [Stabilize(EMPTY)]
    if kind == "destabilize":
        ci = order[edge[1]] + 1
        moves = []
        # conjugators may hide extra occurrences of the cancelling generator
        for idx, r in enumerate(P.relators, start=1):
            if not is_cyclically_reduced(r):
                _, c = cyclic_reduce(r)
                m = Conjugate(idx, invert_word(c))
                P = apply_move(P, m)
                moves.append(m)
        destabilize_parts(P, ci)
        moves.append(Destabilize(ci))
        return apply_move(P, Destabilize(ci)), moves
    raise ValueError(f"unknown edge {edge!r}")


def certificate_from_path(P: Presentation, path: list[tuple[tuple, tuple]]) -> Certificate:
    """Concrete certificate for a class-level path ``[(edge, child_key), ...]``."""
    C = P
    moves: list[Move] = []
    for edge, child in path:
        C, ms = _concrete_moves(C, edge)
        moves += ms
        if canonical_key(C) != child:
            raise AssertionError(f"replay of {edge} left the expected class")
    return Certificate(P, tuple(moves), C)


# Strategies

class _Budget(Exception):
    pass


def _path(parents: dict, key: tuple) -> list[tuple[tuple, tuple]]:
    path = []
    while parents[key] is not None:
        parent, edge = parents[key]
        path.append((edge, key))
        key = parent
    path.reverse()
    return path


def _is_goal(key: tuple) -> bool:
    return key == trivial_key(key[0])


def _bfs(root: tuple, cfg: SearchConfig, stats: SearchStats, deadline: float):
    parents = {root: None}
    stats.discovered = 1
    if _is_goal(root):
        return "FOUND", []
    frontier = [root]
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        while frontier:
            stats.frontier_peak = max(stats.frontier_peak, len(frontier))
            if pool is None:
                expansions: Iterator = (expand(k, cfg.max_len, cfg.max_gens) for k in frontier)
            else:
                size = max(1, len(frontier) // (4 * cfg.workers))
                chunks = [frontier[x : x + size] for x in range(0, len(frontier), size)]
                batches = pool.map(_expand_batch, [(c, cfg.max_len, cfg.max_gens) for c in chunks])
                expansions = (e for batch in batches for e in batch)
            nxt = []
            for key, edges in zip(frontier, expansions):
                if stats.expanded >= cfg.node_budget or time.perf_counter() > deadline:
                    raise _Budget
                stats.expanded += 1
                for edge, child in edges:
                    stats.generated += 1
                    if child in parents:
                        stats.dedup_hits += 1
                        continue
                    parents[child] = (key, edge)
                    stats.discovered += 1
                    if _is_goal(child):
                        return "FOUND", _path(parents, child)
                    nxt.append(child)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return "EXHAUSTED", None


def _beam(root: tuple, cfg: SearchConfig, stats: SearchStats, deadline: float):
    parents = {root: None}
    stats.discovered = 1
    if _is_goal(root):
        return "FOUND", []
    frontier = [root]
    pruned = False
    while frontier:
        stats.frontier_peak = max(stats.frontier_peak, len(frontier))
        nxt = []
        for key in frontier:
            if stats.expanded >= cfg.node_budget or time.perf_counter() > deadline:
                raise _Budget
            stats.expanded += 1
            for edge, child in expand(key, cfg.max_len, cfg.max_gens):
                stats.generated += 1
                if child in parents:
                    stats.dedup_hits += 1
                    continue
                parents[child] = (key, edge)
                stats.discovered += 1
                if _is_goal(child):
                    return "FOUND", _path(parents, child)
                nxt.append(child)
        # total relator length, ties by key
        nxt.sort(key=lambda k: (sum(len(r) for r in k[1]), k))
        if len(nxt) > cfg.beam_width:
            pruned = True
            nxt = nxt[: cfg.beam_width]
        frontier = nxt
    if pruned:
        raise _Budget
    return "EXHAUSTED", None


def _iddfs(root: tuple, cfg: SearchConfig, stats: SearchStats, deadline: float):
    stats.discovered = 1
    if _is_goal(root):
        return "FOUND", []
    limit = 1
    while True:
        best = {root: 0}
        path: list[tuple[tuple, tuple]] = []
        cut = False

        def dfs(key: tuple, depth: int) -> bool:
            nonlocal cut
            if stats.expanded >= cfg.node_budget or time.perf_counter() > deadline:
                raise _Budget
            stats.expanded += 1
            for edge, child in expand(key, cfg.max_len, cfg.max_gens):
                stats.generated += 1
                if best.get(child, limit + 1) <= depth + 1:
                    stats.dedup_hits += 1
                    continue
                if child not in best:
                    stats.discovered += 1
                best[child] = depth + 1
                path.append((edge, child))
                if _is_goal(child):
                    return True
                if depth + 1 < limit:
                    if dfs(child, depth + 1):
                        return True
                else:
                    cut = True
                path.pop()
            return False

        stats.discovered = 1
        if dfs(root, 0):
            return "FOUND", path
        if not cut:
            return "EXHAUSTED", None
        limit += 1


def search_trivialization(P: Presentation, cfg: SearchConfig | None = None) -> SearchOutcome:
    """Look for a sequence of moves taking ``P`` to a trivial presentation.

    Breadth-first search is complete within the caps and finds a path with
    the fewest class-changing steps.
    """
    cfg = cfg or SearchConfig()
    cfg.validate(P)
    stats = SearchStats()
    if not P.balanced:
        return SearchOutcome("EXHAUSTED", stats=stats, reason="not balanced")
    if abs(abel_det(P)) != 1:
        return SearchOutcome("EXHAUSTED", stats=stats, reason="abelianization is not trivial")
    t0 = time.perf_counter()
    deadline = t0 + cfg.time_budget
    run = {"bfs": _bfs, "beam": _beam, "iddfs": _iddfs}[cfg.strategy]
    try:
        status, path = run(canonical_key(P), cfg, stats, deadline)
    except _Budget:
        stats.wall_time = time.perf_counter() - t0
        return SearchOutcome("BUDGET", stats=stats)
    stats.wall_time = time.perf_counter() - t0
    if status != "FOUND":
        return SearchOutcome(status, stats=stats)
    cert = certificate_from_path(P, path)
    verdict = verify_certificate(cert)
    if not verdict.valid:
        raise AssertionError(f"search produced an invalid certificate: {verdict.line()}")
    return SearchOutcome("FOUND", cert, len(path), stats)


def scramble(
    P: Presentation, k: int, seed: int, max_len: int = 24, max_gens: int | None = None
) -> tuple[Presentation, list[Move]]:
    """Apply ``k`` seeded random moves drawn from ``neighbors``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if max_gens is None:
        max_gens = P.gen_count + 1
    rng = random.Random(seed)
    applied: list[Move] = []
    for _ in range(k):
        options = neighbors(P, max_len, max_gens)
        if not options:
            break
        m, P = rng.choice(options)
        applied.append(m)
    return P, applied
