import numpy as np
import pytest

from hsitucker.bench import (
    BenchmarkReport,
    format_tables,
    parse_dataset,
    parse_ranks,
    run_benchmark,
    time_factors,
)
from hsitucker.hsi_io import SyntheticSpec, synth_hsi
from hsitucker.hooi import ConvergenceConfig


@pytest.fixture(scope="module")
def report():
    x = synth_hsi(SyntheticSpec(dims=(20, 18, 10), seed=3))
    return run_benchmark(x, "half", repeats=2, dataset="synth")


def test_every_strategy_present(report):
    assert {r.strategy for r in report.rows} == {"random", "svd", "correlation"}
    assert all(r.ranks == (10, 9, 5) for r in report.rows)


def test_total_is_init_plus_convergence(report):
    for r in report.rows:
        assert r.total_seconds == pytest.approx(r.init_seconds + r.convergence_seconds, abs=1e-9)


def test_csv_and_json_agree(report):
    from_json = BenchmarkReport.from_json(report.to_json())
    from_csv = BenchmarkReport.from_csv(report.to_csv())
    assert from_json.to_records() == from_csv.to_records() == report.to_records()


def test_deterministic_traces():
    x = synth_hsi(SyntheticSpec(dims=(16, 16, 8), seed=5))
    a = run_benchmark(x, "half", repeats=1, seed=7)
    b = run_benchmark(x, "half", repeats=1, seed=7)
    for ra, rb in zip(a.rows, b.rows):
        assert ra.iterations == rb.iterations
        assert ra.fitness_differences == rb.fitness_differences


def test_cost_columns(report):
    corr, svd = report.row("correlation"), report.row("svd")
    assert corr.estimated_multiplications == 20 * 18**2 + 10 * (20 * 18) ** 2
    assert corr.per_factor_multiplications[1] == 0
    assert svd.estimated_multiplications > corr.estimated_multiplications
    assert report.row("random").estimated_multiplications == 0


def test_per_factor_timing_shapes():
    x = np.random.default_rng(0).standard_normal((8, 7, 6))
    t = time_factors(x, (4, 3, 3), "correlation", 2)
    assert len(t) == 3 and t[1] == 0.0 and t[0] > 0 and t[2] > 0
    assert all(v > 0 for v in time_factors(x, (4, 3, 3), "svd", 2))


def test_tables_dash(report):
    text = format_tables(report, dash_random_init=True)
    line = next(l for l in text.splitlines() if l.startswith("Initialization time"))
    assert line.split()[3] == "-"


def test_parse_dataset_synthetic():
    x = parse_dataset("synth:12x10x6,rank=3,corr=0.95,noise=0,seed=2")
    spec = SyntheticSpec(dims=(12, 10, 6), base_rank=3, band_correlation=0.95, noise_sigma=0.0, seed=2)
    assert np.array_equal(x, synth_hsi(spec))


def test_parse_dataset_unknown_option():
    with pytest.raises(ValueError):
        parse_dataset("synth:4x4x4,colour=red")


def test_parse_ranks():
    assert parse_ranks("half", (145, 145, 200)) == (73, 73, 100)
    assert parse_ranks("3,2,1", (4, 4, 4)) == (3, 2, 1)
    with pytest.raises(ValueError):
        parse_ranks("3,2", (4, 4, 4))


def test_tolerance_shared(report):
    assert {r.tol for r in report.rows} == {ConvergenceConfig().tol}
