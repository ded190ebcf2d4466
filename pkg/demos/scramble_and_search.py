"""
Scramble, search, verify
========================

Random moves hide the trivial presentation; breadth-first search over
canonical classes finds a way back, and the certificate replays on its own.
"""

from acfx.certificate import parse_certificate, serialize_certificate, verify_certificate
from acfx.presentation import gen_trivial
from acfx.search import SearchConfig, scramble, search_trivialization

S, moves = scramble(gen_trivial(2), 8, seed=7, max_gens=2)
print("scrambled:", S, "after", len(moves), "moves")

out = search_trivialization(S, SearchConfig(max_gens=2))
print(out.summary_line())

text = serialize_certificate(out.certificate)
print(text)
print(verify_certificate(parse_certificate(text)).line())

# same search, different strategies
for strategy in ("beam", "iddfs"):
    res = search_trivialization(S, SearchConfig(max_gens=2, strategy=strategy))
    print(strategy, res.summary_line(with_time=False))
