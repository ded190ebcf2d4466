"""
Relators as consequences
========================

A consequence certificate writes a target word as a product of conjugated
relators.  The two bundled certificates derive both GP2 relators from the
fig5 pair.
"""

from importlib import resources

from acfx.certificate import ConsequenceCertificate, find_consequence, parse_certificate, verify_consequence
from acfx.presentation import fig5_presentation, gen_gpn
from acfx.words import format_word

for name in ("fig5_braid", "fig5_power"):
    cc = parse_certificate(resources.files("acfx").joinpath(f"data/{name}.acfx").read_text())
    print(name, format_word(cc.target), len(cc.terms), "terms:", verify_consequence(cc).line())

# small cases can be found directly
rels = fig5_presentation().relators
target = gen_gpn(2).relators[0]
terms = find_consequence(rels, target)
for t in terms:
    print(f"  g={format_word(t.g)} r={t.r} e={t.e:+d}")
print(verify_consequence(ConsequenceCertificate(rels, target, terms)).line())
