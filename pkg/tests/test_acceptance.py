"""Acceptance gate: every shipped correctness criterion, run at its
stated tolerance, one pass/fail line per check, with a wall-clock budget
per group.

Run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to stream
the per-check lines as they are produced).
"""
import time

import pytest

from kmtheta.config import RunConfig
from kmtheta import verify


def _run(suite_name, budget_seconds):
    cfg = RunConfig()
    fn = dict(verify.SUITES)[suite_name]
    t0 = time.perf_counter()
    records = fn(cfg)
    elapsed = time.perf_counter() - t0
    assert records, f"suite {suite_name} produced no checks"
    failures = []
    for r in sorted(records, key=lambda r: r["name"]):
        status = "PASS" if r["pass"] else "FAIL"
        print(f"{status} {r['name']}: value={r['value']:.3e} "
              f"tol={r['tolerance']:.1e}")
        if not r["pass"]:
            failures.append(r["name"])
    assert not failures, f"failed checks: {failures}"
    assert elapsed < budget_seconds, (
        f"suite {suite_name} took {elapsed:.1f}s, budget {budget_seconds}s")


def test_acceptance_1_exact_polynomial_identities():
    _run("exact", 10)


def test_acceptance_2_weil_representation_relations():
    _run("weil", 5)


def test_acceptance_3_theta_oracle_and_modularity():
    _run("theta", 120)


def test_acceptance_4_sublattice_splitting():
    _run("splitting", 300)


def test_acceptance_5_unfolded_fourier_expansion():
    _run("unfolding", 600)


def test_acceptance_6_coefficient_roundtrip():
    _run("roundtrip", 120)


def test_acceptance_7_frame_geometry_and_translation_phases():
    _run("geometry", 5)


def test_acceptance_8_definite_complement_vanishing():
    _run("vanishing", 60)
