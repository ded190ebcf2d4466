"""Semi-deciding triviality: abelianization, finite quotients, coset enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .presentation import Presentation, abel_det, abelianization
from .words import alphabet_for, letter_code

DEFAULT_COSET_LIMIT = 2**20


class CosetLimitExceeded(Exception):
    pass


@dataclass
class CosetEnumeration:
    """Outcome of a coset enumeration over the trivial subgroup.

    ``closed`` with ``count`` cosets means the group has order ``count``;
    otherwise the live-coset limit was hit and nothing is concluded.
    ``table[c][k]`` is the coset reached from coset ``k`` (0-based) by the
    letter with code ``c``.
    """

    closed: bool
    count: int | None
    max_live: int
    total_defined: int
    table: list[list[int]] | None = None


class _Enumerator:
    # HLT with full coincidence processing.  Cosets are 1-based; 0 = undefined.

    def __init__(self, ncols: int, relators: list[list[int]], limit: int):
        self.ncols = ncols
        self.rels = relators
        self.limit = limit
        self.cols = [[0, 0] for _ in range(ncols)]
        self.p = [0, 1]
        self.n = 1
        self.live = 1
        self.max_live = 1
        self.total = 1

    def define(self, a: int, x: int) -> None:
        if self.live >= self.limit:
            raise CosetLimitExceeded
        self.n += 1
        self.total += 1
        self.live += 1
        self.max_live = max(self.max_live, self.live)
        b = self.n
        self.p.append(b)
        for col in self.cols:
            col.append(0)
        self.cols[x][a] = b
        self.cols[x ^ 1][b] = a

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.p[hi] = lo
            queue.append(hi)
            self.live -= 1

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        cols = self.cols
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = cols[x][g]
                if not d:
                    continue
                cols[x ^ 1][d] = 0
                mu, nu = self.rep(g), self.rep(d)
                if cols[x][mu]:
                    self._merge(nu, cols[x][mu], queue)
                elif cols[x ^ 1][nu]:
                    self._merge(mu, cols[x ^ 1][nu], queue)
                else:
                    cols[x][mu] = nu
                    cols[x ^ 1][nu] = mu

    def scan_and_fill(self, a: int, w: list[int]) -> None:
        cols = self.cols
        f = b = a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and cols[w[i]][f]:
                f = cols[w[i]][f]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and cols[w[j] ^ 1][b]:
                b = cols[w[j] ^ 1][b]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                cols[w[i]][f] = b
                cols[w[i] ^ 1][b] = f
                return
            self.define(f, w[i])

    def compact(self, a: int) -> int:
        """Renumber live cosets in order; return the new index of ``a``."""
        live = [k for k in range(1, self.n + 1) if self.p[k] == k]
        new = [0] * (self.n + 1)
        for idx, k in enumerate(live, start=1):
            new[k] = idx
        na = sum(1 for k in live if k < a) + 1
        self.cols = [[0] + [new[col[k]] for k in live] for col in self.cols]
        self.n = len(live)
        self.p = list(range(self.n + 1))
        return na

    def run(self) -> None:
        a = 1
        while a <= self.n:
            if self.n > 4096 and 2 * self.live < self.n:
                a = self.compact(a)
                continue
            if self.p[a] == a:
                for w in self.rels:
                    self.scan_and_fill(a, w)
                    if self.p[a] != a:
                        break
                if self.p[a] == a:
                    for x in range(self.ncols):
                        if not self.cols[x][a]:
                            self.define(a, x)
            a += 1


def coset_enumerate(P: Presentation, limit: int = DEFAULT_COSET_LIMIT) -> CosetEnumeration:
    """Enumerate cosets of the trivial subgroup (HLT strategy).

    ``limit`` bounds the number of live cosets.
    """
    if limit < 1:
        raise ValueError("coset limit must be at least 1")
    if P.gen_count == 0:
        return CosetEnumeration(True, 1, 1, 1, [])
    rels = [[letter_code(l) for l in r] for r in P.relators if r]
    en = _Enumerator(2 * P.gen_count, rels, limit)
    try:
        en.run()
    except CosetLimitExceeded:
        return CosetEnumeration(False, None, en.max_live, en.total)
    en.compact(1)
    table = [[c - 1 for c in col[1:]] for col in en.cols]
    return CosetEnumeration(True, en.n, en.max_live, en.total, table)


# Finite targets

@dataclass
class FiniteTarget:
    """A finite group as a multiplication table; element 0 is the identity.

    ``perms`` holds the permutation (images of 0..d-1) of each element when
    the group is a permutation group; witnesses then print in cycle notation.
    """

    name: str
    mul: np.ndarray
    inv: np.ndarray
    perms: list[tuple[int, ...]] | None = None

    @property
    def order(self) -> int:
        return len(self.inv)

    @classmethod
    def from_permutations(cls, name: str, perms: Sequence[Sequence[int]]) -> "FiniteTarget":
        perms = [tuple(p) for p in perms]
        ident = tuple(range(len(perms[0])))
        perms.sort(key=lambda p: (p != ident, p))
        index = {p: k for k, p in enumerate(perms)}
        size = len(perms)
        mul = np.empty((size, size), dtype=np.int64)
        # product a*b acts as a first, then b
        for a, pa in enumerate(perms):
            for b, pb in enumerate(perms):
                mul[a, b] = index[tuple(pb[i] for i in pa)]
        inv = np.empty(size, dtype=np.int64)
        for a, pa in enumerate(perms):
            q = [0] * len(pa)
            for i, j in enumerate(pa):
                q[j] = i
            inv[a] = index[tuple(q)]
        return cls(name, mul, inv, perms)

    @classmethod
    def symmetric(cls, d: int) -> "FiniteTarget":
        return cls.from_permutations(f"S{d}", list(itertools.permutations(range(d))))

    @classmethod
    def alternating(cls, d: int) -> "FiniteTarget":
        even = [p for p in itertools.permutations(range(d)) if _parity(p) == 0]
        return cls.from_permutations(f"A{d}", even)

    @classmethod
    def from_table(cls, name: str, table: Sequence[Sequence[int]], spot_checks: int = 200,
                   seed: int = 0) -> "FiniteTarget":
        """Load an explicit table whose element 0 must be the identity."""
        mul = np.asarray(table, dtype=np.int64)
        size = mul.shape[0]
        if mul.shape != (size, size) or mul.min() < 0 or mul.max() >= size:
            raise ValueError("not a square table over its own elements")
        if not (np.array_equal(mul[0], np.arange(size)) and np.array_equal(mul[:, 0], np.arange(size))):
            raise ValueError("element 0 is not the identity")
        for row in mul:
            if len(set(row.tolist())) != size:
                raise ValueError("table rows must be permutations")
        rng = np.random.default_rng(seed)
        for a, b, c in rng.integers(0, size, size=(spot_checks, 3)):
            if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                raise ValueError(f"associativity fails at ({a}, {b}, {c})")
        inv = np.array([int(np.flatnonzero(mul[a] == 0)[0]) for a in range(size)])
        return cls(name, mul, inv)

    def describe(self, element: int) -> str:
        if self.perms is None:
            return str(element)
        return cycle_notation(self.perms[element])


def _parity(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            parity ^= (length - 1) & 1
    return parity


def cycle_notation(p: Sequence[int]) -> str:
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(str(j + 1))
            j = p[j]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "()"


def default_battery() -> list[FiniteTarget]:
    return [FiniteTarget.symmetric(d) for d in (2, 3, 4, 5)] + [FiniteTarget.alternating(5)]


def _relator_schedule(P: Presentation) -> list[list[tuple[int, int]]]:
    """For each generator g, the relators fully determined once 1..g are set,
    as (0-based generator, sign) sequences."""
    sched: list[list[tuple[int, int]]] = [[] for _ in range(P.gen_count + 1)]
    for r in P.relators:
        if r:
            top = max(abs(l) for l in r)
            sched[top].append([(abs(l) - 1, 1 if l > 0 else -1) for l in r])
    return sched


def _homomorphisms(P: Presentation, Q: FiniteTarget):
    """Yield every assignment of generator images killing all relators.

    Backtracks over generators in order and checks each relator as soon as
    all of its generators have images.
    """
    n = P.gen_count
    sched = _relator_schedule(P)
    mul = Q.mul.tolist()
    inv = Q.inv.tolist()
    images = [0] * n
    inverses = [0] * n

    def holds(rel) -> bool:
        e = 0
        for g, s in rel:
            e = mul[e][images[g] if s > 0 else inverses[g]]
        return e == 0

    def rec(g: int):
        if g == n:
            yield tuple(images)
            return
        for a in range(Q.order):
            images[g] = a
            inverses[g] = inv[a]
            if all(holds(rel) for rel in sched[g + 1]):
                yield from rec(g + 1)

    yield from rec(0)


def count_homomorphisms(P: Presentation, Q: FiniteTarget) -> int:
    return sum(1 for _ in _homomorphisms(P, Q))


@dataclass
class Witness:
    """A homomorphism to a finite group sending some generator off the identity."""

    target: FiniteTarget
    images: tuple[int, ...]

    def format(self) -> str:
        alphabet = alphabet_for(len(self.images))
        parts = [f"{alphabet[g]}={self.target.describe(a)}" for g, a in enumerate(self.images)]
        return f"{self.target.name}:" + ",".join(parts)

    def check(self, P: Presentation) -> bool:
        mul, inv = self.target.mul, self.target.inv
        for r in P.relators:
            e = 0
            for l in r:
                a = self.images[abs(l) - 1]
                e = mul[e, a if l > 0 else inv[a]]
            if e != 0:
                return False
        return any(self.images)


def find_nontrivial_quotient(P: Presentation, targets: Sequence[FiniteTarget] | None = None) -> Witness | None:
    """First homomorphism with a non-identity generator image, scanning the
    targets in order (default: S2, S3, S4, S5, A5)."""
    for Q in default_battery() if targets is None else targets:
        for images in _homomorphisms(P, Q):
            if any(images):
                return Witness(Q, images)
    return None


def _nullvector_mod(rows: list[list[int]], n: int, p: int) -> list[int] | None:
    """Nonzero ``v`` with ``rows . v = 0 (mod p)``, p prime."""
    m = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        s = pow(m[r][c], -1, p)
        m[r] = [x * s % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    v = [0] * n
    v[free[0]] = 1
    for i, c in enumerate(pivots):
        v[c] = -m[i][free[0]] % p
    return v


def _smallest_prime_factor(d: int) -> int:
    d = abs(d)
    if d == 0:
        return 2
    f = 2
    while f * f <= d:
        if d % f == 0:
            return f
        f += 1
    return d


def abelian_witness(P: Presentation) -> Witness | None:
    """A cyclic quotient of prime order, realised inside S_p, when the
    abelianization is not trivial."""
    if not P.balanced or P.gen_count == 0:
        return None
    det = abel_det(P)
    if abs(det) == 1:
        return None
    p = _smallest_prime_factor(det)
    v = _nullvector_mod(abelianization(P).tolist(), P.gen_count, p)
    if v is None:
        return None
    Q = FiniteTarget.from_permutations(
        f"S{p}", [tuple((i + k) % p for i in range(p)) for k in range(p)]
    )
    # element index of the shift by k
    shift_index = {Q.perms[e]: e for e in range(Q.order)}
    images = tuple(shift_index[tuple((i + k) % p for i in range(p))] for k in v)
    return Witness(Q, images)


@dataclass
class OracleVerdict:
    kind: str  # "TRIVIAL" | "NONTRIVIAL" | "UNKNOWN"
    witness: Witness | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    def line(self) -> str:
        if self.kind == "TRIVIAL":
            return "TRIVIAL cosets=1"
        if self.kind == "NONTRIVIAL":
            body = self.witness.format() if self.witness else self.reason
            return f"NONTRIVIAL witness={body}"
        return f"UNKNOWN reason={self.reason}"


def triviality_verdict(
    P: Presentation,
    coset_limit: int = DEFAULT_COSET_LIMIT,
    battery: Sequence[FiniteTarget] | None = None,
) -> OracleVerdict:
    """Abelianization, then finite quotients, then coset enumeration."""
    if P.gen_count == 0:
        return OracleVerdict("TRIVIAL", stats={"cosets": 1})
    if P.balanced and abs(abel_det(P)) != 1:
        w = abelian_witness(P)
        return OracleVerdict("NONTRIVIAL", w, reason=f"abelianization:det={abel_det(P)}")
    w = find_nontrivial_quotient(P, battery)
    if w is not None:
        return OracleVerdict("NONTRIVIAL", w)
    res = coset_enumerate(P, coset_limit)
    stats = {"max_live": res.max_live, "total_defined": res.total_defined}
    if not res.closed:
        return OracleVerdict("UNKNOWN", reason="coset-limit", stats=stats)
    stats["cosets"] = res.count
    if res.count == 1:
        return OracleVerdict("TRIVIAL", stats=stats)
    return OracleVerdict("NONTRIVIAL", reason=f"order:{res.count}", stats=stats)
