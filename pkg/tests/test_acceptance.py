"""Acceptance gate.  Each test prints one ``criterion N: PASS|FAIL ...`` line.

Run on its own with ``pytest tests/test_acceptance.py -s -q``; the lines are
also shown without ``-s`` because they bypass output capture.
"""

import os
import subprocess
import sys
import time
from importlib import resources
from pathlib import Path

import pytest

from acfx.certificate import parse_certificate, verify_consequence
from acfx.cli import main
from acfx.invariants import run_standard_battery, scramble_recovery
from acfx.oracle import coset_enumerate, triviality_verdict
from acfx.presentation import Presentation, abel_det, fig5_presentation, gen_gpn, gen_trivial, parse_presentation

BATTERY_CASES = 10_000
BATTERY_SEED = 2026
RECOVERY_INSTANCES = 100

# the same report, produced in a fresh interpreter for the determinism check
REPORT_SCRIPT = f"""
import sys, time
from acfx.invariants import run_standard_battery, scramble_recovery
t0 = time.perf_counter()
for r in run_standard_battery({BATTERY_CASES}, {BATTERY_SEED}):
    print(r.line())
t1 = time.perf_counter()
for r in scramble_recovery({RECOVERY_INSTANCES}, seed=0):
    print(r.line())
print(f"{{t1 - t0:.1f}} {{time.perf_counter() - t1:.1f}}", file=sys.stderr)
"""

_first_run = {}


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def test_criterion_1_family_triviality(report, capsys):
    rows, ok = [], True
    # (n, coset limit, seconds allowed, pinned max_live, pinned total_defined)
    for n, limit, allowed, live, total in [(0, 10**4, 1, 7, 10), (1, 10**4, 1, 12, 13), (2, 10**6, 60, 25, 25)]:
        t0 = time.perf_counter()
        code = main(["judge", "--coset-limit", str(limit), f"x,y | xyxYXY, {'x' * (n + 1) + 'Y' * n}"])
        elapsed = time.perf_counter() - t0
        out = capsys.readouterr().out
        stats = coset_enumerate(gen_gpn(n), limit)
        good = (code == 0 and out == "TRIVIAL cosets=1\n" and elapsed < allowed
                and (stats.max_live, stats.total_defined) == (live, total))
        ok &= good
        rows.append(f"GP{n}={'ok' if good else 'bad'}({elapsed * 1000:.1f}ms,live={stats.max_live},defined={stats.total_defined})")
    report(1, ok, " ".join(rows))


def test_criterion_2_consequence_certificates(report):
    rows, ok = [], True
    targets = {"fig5_braid": "xyxYXY", "fig5_power": "xxxYY"}
    for name, target in targets.items():
        cc = parse_certificate(resources.files("acfx").joinpath(f"data/{name}.acfx").read_text())
        t0 = time.perf_counter()
        v = verify_consequence(cc)
        elapsed = time.perf_counter() - t0
        good = (v.valid and elapsed < 0.01 and cc.relators == fig5_presentation().relators
                and cc.target == parse_presentation(f"x,y | {target}").relators[0])
        ok &= good
        rows.append(f"{target}:{v.line()}({elapsed * 1000:.2f}ms,{len(cc.terms)} terms)")
    report(2, ok, " ".join(rows))


def test_criterion_3_abelianization(report):
    dets = [abel_det(gen_gpn(n)) for n in range(9)]
    fig5 = abel_det(fig5_presentation())
    trivial = [abel_det(gen_trivial(n)) for n in range(1, 6)]
    ok = dets == [1] * 9 and fig5 == 1 and trivial == [1] * 5
    report(3, ok, f"GP0..8={dets} fig5={fig5} T1..5={trivial}")


def _first_report():
    """Criteria 4 and 5 share this run; the determinism check reuses it."""
    if not _first_run:
        t0 = time.perf_counter()
        battery = run_standard_battery(BATTERY_CASES, BATTERY_SEED)
        t1 = time.perf_counter()
        recovery = scramble_recovery(RECOVERY_INSTANCES, seed=0)
        t2 = time.perf_counter()
        text = "".join(r.line() + "\n" for r in battery) + "".join(r.line() + "\n" for r in recovery)
        _first_run.update(battery=battery, recovery=recovery, text=text,
                          battery_time=t1 - t0, recovery_time=t2 - t1)
    return _first_run


def test_criterion_4_move_invariance(report):
    run = _first_report()
    battery, elapsed = run["battery"], run["battery_time"]
    ok = all(r.ok and r.cases >= BATTERY_CASES for r in battery) and elapsed < 120
    summary = " ".join(f"{r.name}:{sum(r.failures.values())}fail/{r.cases}cases" for r in battery)
    report(4, ok, f"{summary} time={elapsed:.1f}s")


def test_criterion_5_scramble_recovery(report):
    run = _first_report()
    recovery, elapsed = run["recovery"], run["recovery_time"]
    bad = [r.seed for r in recovery if not r.ok]
    worst = max(r.depth for r in recovery if r.depth is not None)
    ok = not bad and len(recovery) == RECOVERY_INSTANCES and elapsed < 60
    report(5, ok, f"instances={len(recovery)} failures={bad} max_depth={worst} time={elapsed:.1f}s")


def test_criterion_6_coset_correctness(report, capsys):
    cyclic = [coset_enumerate(Presentation(1, ((1,) * k,)), 100).count for k in range(1, 13)]
    trivial = [coset_enumerate(gen_trivial(n), 100).count for n in range(5)]
    verdicts = []
    for text in ("x,y | xyXY, x", "x | xx"):
        code = main(["judge", text])
        verdicts.append((code, capsys.readouterr().out.strip()))
    witnesses_hold = all(triviality_verdict(parse_presentation(t)).witness.check(parse_presentation(t))
                         for t in ("x,y | xyXY, x", "x | xx"))
    ok = (cyclic == list(range(1, 13)) and trivial == [1] * 5 and witnesses_hold
          and verdicts == [(3, "NONTRIVIAL witness=S2:x=(),y=(1 2)"), (3, "NONTRIVIAL witness=S2:x=(1 2)")])
    report(6, ok, f"cyclic={cyclic} trivial={trivial} verdicts={[v for _, v in verdicts]}")


def test_criterion_7_determinism(report):
    first = _first_report()["text"]
    env = dict(os.environ, PYTHONHASHSEED="12345")
    proc = subprocess.run([sys.executable, "-c", REPORT_SCRIPT], capture_output=True, text=True, env=env, timeout=600)
    same = proc.returncode == 0 and proc.stdout == first
    report(7, same, f"bytes={len(first)} identical={same} second_run_times={proc.stderr.strip()}")


def test_criterion_8_scope_note(report):
    # Topological claims have no algebraic encoding here, and a full SAC
    # trivialization of GP2 is a long-running search, not a gate.
    readme = Path(__file__).parents[1] / "README.md"
    note = readme.is_file() and "not reproduced" in " ".join(readme.read_text().split())
    report(8, note, "scope note present in README (geometric claims and full SAC run excluded)")
