"""Acceptance gate: every criterion at its stated tolerance, one line each.

Criteria 1-12 are computed by acceptance_lib (exact arithmetic, zero
tolerance; runtime budgets asserted where stated).  Criterion 13 is the
determinism contract: the full acceptance report and a battery of CLI
invocations must be byte-identical across independent runs, including across
processes with different string-hash seeds.
"""

import json
import os
import subprocess
import sys
import time

import pytest

import acceptance_lib

PKG_SRC = os.path.join(os.path.dirname(__file__), "..", "src")
HERE = os.path.dirname(__file__)

FULL_FUZZ = int(os.environ.get("ACCEPTANCE_FUZZ_COUNT", "10000"))


def _announce(num, desc, ok):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {desc}")


@pytest.mark.parametrize("num,desc,fn", [c for c in acceptance_lib.CRITERIA if c[0] != "10"])
def test_criterion(num, desc, fn):
    result = fn()
    _announce(num, desc, result["pass"])
    assert result["pass"], result


def test_criterion_10_poset_suites():
    t0 = time.monotonic()
    result = acceptance_lib.crit_10_poset_suites(FULL_FUZZ)
    _announce("10", f"poset suites and fuzz campaigns ({FULL_FUZZ} instances each)", result["pass"])
    assert result["poset_map_fuzz"]["instances"] >= FULL_FUZZ
    assert result["nerve_fuzz"]["instances"] >= FULL_FUZZ
    assert result["poset_map_fuzz"]["hypotheses_satisfied"] > 0
    assert result["nerve_fuzz"]["hypotheses_satisfied"] > 0
    assert result["pass"], result
    print(f"  fuzz wall time: {time.monotonic() - t0:.1f}s")


def test_criterion_13_determinism():
    # in-process: the full report twice (small fuzz share keeps this quick;
    # the campaigns themselves are deterministic by seed either way)
    b1 = acceptance_lib.report_bytes(fuzz_count=300)
    b2 = acceptance_lib.report_bytes(fuzz_count=300)
    ok_inproc = b1 == b2

    # across processes with hostile hash randomization
    env = dict(os.environ)
    env["PYTHONPATH"] = PKG_SRC + os.pathsep + env.get("PYTHONPATH", "")
    outs = []
    for hash_seed in ("1", "31415"):
        env["PYTHONHASHSEED"] = hash_seed
        proc = subprocess.run(
            [sys.executable, os.path.join(HERE, "acceptance_lib.py"), "120"],
            capture_output=True,
            env=env,
            cwd=HERE,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(proc.stdout)
    ok_subproc = outs[0] == outs[1]
    json.loads(outs[0])

    # CLI battery, same contract
    cli_outs = []
    for hash_seed in ("2", "2718"):
        env["PYTHONHASHSEED"] = hash_seed
        batch = []
        for args in (
            ["taut", "pair", "--paper-6-3", "--format", "json"],
            ["vanish-check", "--preset", "intstab-f2", "--box", "5,5", "--format", "json"],
            ["report", "figure-lgens", "--format", "json"],
            ["sp4", "subsets", "--format", "json"],
        ):
            proc = subprocess.run(
                [sys.executable, "-m", "bigraded.cli"] + args,
                capture_output=True,
                env=env,
            )
            assert proc.returncode == 0, proc.stderr.decode()
            batch.append(proc.stdout)
        cli_outs.append(b"".join(batch))
    ok_cli = cli_outs[0] == cli_outs[1]

    ok = ok_inproc and ok_subproc and ok_cli
    _announce("13", "byte-identical JSON reports across runs", ok)
    assert ok
