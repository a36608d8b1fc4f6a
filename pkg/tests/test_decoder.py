"""Lookup-table decoding, benchmark sweeps and fit helpers."""

import numpy as np
import pytest

from s17bench.backends import RunConfig, SyndromeDistribution, run
from s17bench.decoder import (
    GATE_FAMILIES,
    GATE_PARAMS,
    P_INIT_PRESETS,
    BenchmarkRecord,
    LookupTable,
    SweepSpec,
    benchmark_floor,
    build_gate_channel,
    build_table,
    excess_loglog_slope,
    linear_slope,
    logical_error_probability,
    loglog_slope,
    matched_infidelity_bins,
    max_bin_spread,
    open_linspace,
    run_benchmark,
)

import oracle


def dist(probs, n=0):
    return SyndromeDistribution(dict(probs), {}, n)


def record(infidelity, p_code, gate="v1", p_init=0.0):
    return BenchmarkRecord(
        gate=gate,
        scenario="I",
        param1_name="R",
        param1=32.0,
        param2_name="gamma",
        param2=0.5,
        p_init=p_init,
        infidelity=infidelity,
        p_code=p_code,
        p_code_stderr=0.0,
        backend="exact_dm",
        n_samples=0,
        seed=0,
    )


def test_open_linspace_strictly_interior():
    pts = open_linspace(1.0, 2.0, 5)
    assert len(pts) == 5
    assert pts[0] > 1.0 and pts[-1] < 2.0
    assert np.allclose(np.diff(pts), pts[1] - pts[0])


def test_lookup_table_validation():
    LookupTable({0: 1.0}, {1: 1.0}).validate()
    with pytest.raises(ValueError):
        LookupTable({0: 0.9}, {1: 1.0}).validate()


def test_build_table_renormalizes_and_unions_keys():
    table = build_table(dist({0: 0.5, 1: 0.5}), dist({2: 0.25}))
    assert table.p1[2] == pytest.approx(1.0)
    assert set(table.keys()) == {0, 1, 2}


def test_logical_error_probability_cases():
    # perfectly distinguishable: no decoding error
    perfect = LookupTable({0: 1.0}, {1: 1.0})
    assert logical_error_probability(perfect, 0) == 0.0
    assert logical_error_probability(perfect, 1) == 0.0
    # identical conditionals: every key is a fair-coin tie
    confused = LookupTable({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5})
    assert logical_error_probability(confused, 0) == pytest.approx(0.5)
    # asymmetric case decoded by maximum likelihood
    table = LookupTable({0: 0.9, 1: 0.1}, {0: 0.2, 1: 0.8})
    assert logical_error_probability(table, 0) == pytest.approx(0.1)
    assert logical_error_probability(table, 1) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        logical_error_probability(table, 2)


def test_benchmark_record_bounds():
    with pytest.raises(ValueError):
        record(1e-3, 1.5)


def test_gate_tables_consistent():
    assert set(GATE_PARAMS) == set(GATE_FAMILIES)
    assert set(P_INIT_PRESETS) == set(GATE_FAMILIES)
    for gate in ("v1", "v2", "ldiv", "ldiv_no_k2"):
        channel = build_gate_channel(
            gate, *(0.5 * (lo + hi) for _, lo, hi in GATE_PARAMS[gate])
        )
        acc = sum(k.conj().T @ k for k in channel.kraus_ops)
        assert np.allclose(acc, np.eye(4), atol=1e-9)


def test_sweep_spec_grid():
    spec = SweepSpec(gate="v1", scenario="I", grid_shape=(4, 3))
    pts = spec.grid_points()
    assert len(pts) == 12
    (_, lo1, hi1), (_, lo2, hi2) = GATE_PARAMS["v1"]
    for a, b in pts:
        assert lo1 < a < hi1
        assert lo2 < b < hi2
    ideal = SweepSpec(gate="ideal", scenario="I")
    assert ideal.grid_points() == [(0.0, 0.0)]
    with pytest.raises(ValueError):
        SweepSpec(gate="cz", scenario="I")


def test_sweep_spec_custom_bounds():
    spec = SweepSpec(
        gate="v1", scenario="I", grid_shape=(3, 3), param1_bounds=(100.0, 200.0)
    )
    assert all(100.0 < a < 200.0 for a, _ in spec.grid_points())


def test_effective_p_inits_fall_back_to_presets():
    assert SweepSpec(gate="v2", scenario="I").effective_p_inits() == P_INIT_PRESETS["v2"]
    assert SweepSpec(
        gate="v2", scenario="I", p_init_values=(0.004,)
    ).effective_p_inits() == (0.004,)


def test_run_benchmark_small_sweep():
    spec = SweepSpec(gate="ideal", scenario="I", p_init_values=(0.0, 0.01))
    recs = run_benchmark(spec)
    assert len(recs) == 2
    noiseless = next(r for r in recs if r.p_init == 0.0)
    noisy = next(r for r in recs if r.p_init == 0.01)
    assert noiseless.p_code <= 1e-10
    assert noiseless.infidelity <= 1e-12
    # the ideal-gate p_code must equal the independent oracle floor
    assert noisy.p_code == pytest.approx(oracle.scenario_one_floor(0.01), abs=1e-10)


def test_run_benchmark_thread_count_invariance():
    base = dict(gate="ideal", scenario="I", p_init_values=(0.0, 0.005, 0.01))
    a = run_benchmark(SweepSpec(threads=1, **base))
    b = run_benchmark(SweepSpec(threads=4, **base))
    assert a == b


def test_benchmark_floor_matches_oracle():
    assert benchmark_floor("I", 0.002) == pytest.approx(
        oracle.scenario_one_floor(0.002), abs=1e-12
    )


def test_floor_monotone_in_p_init():
    values = [benchmark_floor("I", p) for p in np.arange(0.0, 0.0101, 0.001)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_loglog_slope_recovers_power_law():
    recs = [record(x, 0.03 * x**2) for x in np.logspace(-4, -2, 12)]
    slope, err = loglog_slope(recs)
    assert slope == pytest.approx(2.0, abs=1e-9)
    assert err < 1e-9
    with pytest.raises(ValueError):
        loglog_slope(recs[:2])


def test_excess_loglog_slope_removes_floor():
    floor = 2e-4
    recs = [record(x, floor + 0.8 * x) for x in np.logspace(-4, -2, 40)]
    raw, _ = loglog_slope(recs)
    excess, _ = excess_loglog_slope(recs, floor)
    assert excess == pytest.approx(1.0, abs=1e-6)
    assert raw < 0.9  # the floor visibly flattens the uncorrected fit


def test_linear_slope_recovers_line():
    recs = [record(x, 5e-5 + 0.37 * x) for x in np.linspace(1e-4, 1e-2, 15)]
    slope, err = linear_slope(recs)
    assert slope == pytest.approx(0.37, abs=1e-9)


def test_matched_bins_and_spread():
    rng = np.random.default_rng(0)
    recs = []
    for x in np.logspace(-4, -2, 60):
        recs.append(record(x, 1e-2 * x))
        recs.append(record(x, 3e-2 * x))
    bins = matched_infidelity_bins(recs, n_bins=10)
    assert bins
    for b in bins:
        assert len(b) >= 3
    # at least the factor-3 family spread, plus the within-bin x variation
    # (bins are 0.2 decades wide, so at most an extra factor 10**0.2)
    spread = max_bin_spread(recs, n_bins=10)
    assert 3.0 <= spread <= 3.0 * 10**0.2 + 1e-9
    assert max_bin_spread([], n_bins=10) == 0.0
