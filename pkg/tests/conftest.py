import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spikeword.classifier import evaluate_exhaustive
from spikeword.homeostasis import network_factor
from spikeword.sweeps import (
    REFERENCE_DUAL_PARTNERS,
    dual_sweep,
    load_reference_triples,
    triple_sweep,
)
from spikeword.trainer import train_set


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
    print(f"\n[acceptance] {status}  {name}", flush=True)


@pytest.fixture(scope="session")
def single_config():
    weights = train_set([992])
    result = network_factor(weights)
    counts = evaluate_exhaustive(weights, result.network_factor)
    return weights, result, counts


@pytest.fixture(scope="session")
def dual_rows():
    return dual_sweep(992, REFERENCE_DUAL_PARTNERS)


@pytest.fixture(scope="session")
def triple_rows():
    return triple_sweep(load_reference_triples())
