"""Acceptance criteria: one PASS/FAIL line per criterion, at the stated tolerances."""
import pytest

from sphereval.verification import CRITERIA

CONFIG = {"n": 3, "K": 32, "seed": 0, "samples": 1_000_000}


@pytest.mark.parametrize("key", sorted(CRITERIA), ids=lambda k: f"criterion_{k:02d}")
def test_criterion(key, capsys):
    title, run = CRITERIA[key]
    results = run(CONFIG)
    failed = [r for r in results if not r.passed]
    with capsys.disabled():
        print(f"\n[{'FAIL' if failed else 'PASS'}] {key:2d} {title}: "
              + "; ".join(f"{r.check} {r.residual:.2e} <= {r.tolerance:.0e}" for r in results))
    assert not failed, "; ".join(f"{r.check}: {r.residual:.3e} > {r.tolerance:.1e}" for r in failed)
