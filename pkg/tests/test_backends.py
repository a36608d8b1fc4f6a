"""Simulation backends: exact enumeration vs an independent oracle, and
trajectory sampling vs the exact distribution."""

import numpy as np
import pytest

from s17bench.backends import RunConfig, SyndromeDistribution, run
from s17bench.gates import FloatingGateParams, floating_cnot

import oracle

P_V1 = FloatingGateParams(R=32.0, gamma_ratio=0.5, variant="v1")


def noisy_config(**kw):
    base = dict(scenario="I", cnot=floating_cnot(P_V1), p_init=0.005)
    base.update(kw)
    return RunConfig(**base)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(scenario="X")
    with pytest.raises(ValueError):
        RunConfig(scenario="I", backend="stabilizer")
    with pytest.raises(ValueError):
        RunConfig(scenario="I", p_init=1.5)
    with pytest.raises(ValueError):
        RunConfig(scenario="I", backend="trajectory", n_samples=0)
    with pytest.raises(ValueError):
        RunConfig(scenario="I", encoded=2)


@pytest.mark.parametrize("scenario", ["I", "II"])
@pytest.mark.parametrize("serialization", ["serialized", "concurrent"])
def test_noiseless_exact_is_deterministic(scenario, serialization):
    if scenario == "II" and serialization == "concurrent":
        pytest.skip("17 live qubits: exact backend refuses by design")
    dist = run(RunConfig(scenario=scenario, serialization=serialization))
    assert dist.probabilities.get(0, 0.0) == pytest.approx(1.0, abs=1e-10)


def test_noiseless_encoded_one_flips_logical_bit():
    dist = run(RunConfig(scenario="I", encoded=1))
    assert dist.probabilities.get(1, 0.0) == pytest.approx(1.0, abs=1e-10)


def test_exact_width_guard():
    with pytest.raises(ValueError, match="trajectory"):
        run(RunConfig(scenario="II", serialization="concurrent"))


@pytest.mark.parametrize("p_init", [0.002, 0.01])
def test_exact_matches_propagation_oracle(p_init):
    """Ideal-gate scenario I agrees with the independent XOR-convolution
    oracle on every one of the 512 result keys."""
    dist = run(RunConfig(scenario="I", p_init=p_init))
    expect = oracle.scenario_one_distribution(p_init)
    got = np.zeros(oracle.N_KEYS)
    for key, prob in dist.probabilities.items():
        got[key] = prob
    assert np.max(np.abs(got - expect)) <= 1e-10


def test_exact_distribution_normalized_noisy_gate():
    dist = run(noisy_config())
    assert dist.total() == pytest.approx(1.0, abs=1e-9)
    assert all(p >= 0.0 for p in dist.probabilities.values())


def test_exact_gate_order_invariance_noiseless():
    a = run(RunConfig(scenario="I"))
    b = run(RunConfig(scenario="I", gate_order="reversed"))
    assert a.probabilities.get(0, 0.0) == pytest.approx(
        b.probabilities.get(0, 0.0), abs=1e-12
    )


def test_trajectory_seed_determinism():
    cfg = dict(backend="trajectory", n_samples=2000, seed=11)
    a = run(noisy_config(**cfg))
    b = run(noisy_config(**cfg))
    assert a.probabilities == b.probabilities
    c = run(noisy_config(backend="trajectory", n_samples=2000, seed=12))
    assert c.probabilities != a.probabilities


def test_trajectory_noiseless_has_no_error_events():
    dist = run(
        RunConfig(scenario="I", backend="trajectory", n_samples=20000, seed=3)
    )
    assert dist.probabilities == {0: 1.0}


def test_trajectory_matches_exact_within_sampling_error():
    """Noisy-gate trajectory counts are binomially consistent with the exact
    probabilities on every key (two-sided exact test, Bonferroni over 512
    keys at an overall false-alarm rate ~1e-4)."""
    from scipy.stats import binom

    exact = run(noisy_config())
    n = 100_000
    sampled = run(noisy_config(backend="trajectory", n_samples=n, seed=21))
    assert sampled.n_samples == n
    worst_pv = 1.0
    for key in range(512):
        p = exact.probabilities.get(key, 0.0)
        k = int(round(sampled.probabilities.get(key, 0.0) * n))
        pv = min(1.0, 2 * min(binom.cdf(k, n, p), binom.sf(k - 1, n, p)))
        worst_pv = min(worst_pv, pv)
    assert worst_pv > 1e-4 / 512


def test_trajectory_std_errors_reported():
    dist = run(noisy_config(backend="trajectory", n_samples=5000, seed=5))
    for key, p in dist.probabilities.items():
        expect = np.sqrt(p * (1 - p) / 5000)
        assert dist.std_errors[key] == pytest.approx(expect, rel=1e-9)


def test_trajectory_scenario_two_runs():
    """The 17-qubit concurrent schedule only the trajectory backend covers."""
    dist = run(
        RunConfig(
            scenario="II",
            serialization="concurrent",
            backend="trajectory",
            n_samples=2000,
            seed=9,
        )
    )
    assert dist.probabilities.get(0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_syndrome_distribution_total():
    d = SyndromeDistribution({0: 0.25, 3: 0.75}, {}, 0)
    assert d.total() == pytest.approx(1.0)
