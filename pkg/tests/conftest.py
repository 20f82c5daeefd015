"""Shared fixtures: the sodium-assay configuration used throughout."""

import pytest

from qcdesign import AssayParams, SimulationPlan, critical_errors


@pytest.fixture(scope="session")
def sodium_assay():
    return AssayParams(sd=0.67, bias=0.1, tea=4.0, alpha=0.01)


@pytest.fixture(scope="session")
def sodium_critical(sodium_assay):
    return critical_errors(sodium_assay)


@pytest.fixture()
def sodium_plan():
    return SimulationPlan(measurements_per_level=1000, levels=2, per_level_per_run=1)
