import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import simcost

ROOT = Path(__file__).resolve().parents[2]
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def test_exact_amplitude_damping_matches_semigroup():
    gen = simcost.amplitude_damping_model(1)
    superop, depth = simcost.amplitude_damping_exact(0.5, 1)
    assert simcost.diamond_distance(superop, simcost.evolve(gen, 0.5)) < 1e-8
    assert 0 < depth <= math.ceil(math.pi)


def test_channels_have_unit_diamond_norm():
    assert simcost.diamond_norm(simcost.evolve(simcost.pauli_model(1), 0.3)) == pytest.approx(1.0, abs=1e-7)


def test_symmetric_channel_error_is_third_order():
    gen = simcost.LindbladGenerator(np.zeros((2, 2), dtype=complex), [math.sqrt(2.0) * X])
    errs = []
    for t in (0.005, 0.01):
        superop, _ = simcost.symmetric_local_channel(X, t)
        errs.append(simcost.diamond_distance(superop, simcost.evolve(gen, t), tol=1e-9))
    assert math.log(errs[1] / errs[0]) / math.log(2.0) == pytest.approx(3.0, abs=0.3)


def test_complexity_and_closed_form():
    assert simcost.lipschitz_seminorm(Z, [X, -1j * X @ Z]) == pytest.approx(2.0)
    assert simcost.pauli_lower_bound_closed_form(2.0, 2.0, 1, 1.0) == pytest.approx(0.0144539, abs=1e-6)
    assert simcost.min_truncation_order(2.0, 2.0) == 2


def test_bound_and_simulate_on_shipped_configs():
    report = json.loads(simcost.bound(str(ROOT / "configs" / "pauli.yaml")))
    assert report["lower_bound"] == pytest.approx(simcost.pauli_lower_bound_closed_form(
        report["params"]["alpha"], report["params"]["beta"], 2, report["params"]["tau"]), abs=1e-12)
    csv = simcost.simulate(str(ROOT / "configs" / "pauli1.yaml"), "poisson", workers=1)
    assert csv.splitlines()[0].startswith("t,")
    assert len(csv.splitlines()) == 1 + 3 * 6


def test_errors_are_mapped():
    with pytest.raises(simcost.ConfigError):
        simcost.bound(os.devnull)
    with pytest.raises(ValueError):
        simcost.diamond_norm(np.eye(3, dtype=complex))
