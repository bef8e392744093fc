import math

import numpy as np
import pytest

from fracspec import (
    BenchmarkConfig,
    GraphSpec,
    TrainConfig,
    add_awgn,
    eigendecompose,
    metrics,
    path_graph,
    random_planar_points,
    run_benchmark,
    synth_signal,
    verify_properties,
)
from fracspec.harness import BASELINE_FAMILIES


class TestSynthSignal:
    def test_full_band_unit_power(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, bandwidth=1.0, seed=4)
        assert x.norm**2 == pytest.approx(300.0, abs=1e-9)

    def test_minimal_band_is_rank_one(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, bandwidth=1e-9, seed=4)
        assert np.linalg.matrix_rank(x.as_real(), tol=1e-10) == 1

    def test_deterministic(self, bench_ctx):
        a = synth_signal(bench_ctx.spatial, 10, seed=5)
        b = synth_signal(bench_ctx.spatial, 10, seed=5)
        assert np.array_equal(a.data, b.data)

    def test_band_limited_spectrum(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, bandwidth=0.3, seed=1)
        v1 = bench_ctx.spatial.v
        v2 = eigendecompose(path_graph(10)).v
        coef = v1.T @ x.as_real() @ v2
        assert np.abs(coef[9:, :]).max() <= 1e-10  # ceil(0.3*30) = 9 live rows
        assert np.abs(coef[:, 3:]).max() <= 1e-10  # ceil(0.3*10) = 3 live cols

    def test_bandwidth_validation(self, bench_ctx):
        for bad in (0.0, 1.5, -0.1):
            with pytest.raises(ValueError):
                synth_signal(bench_ctx.spatial, 10, bandwidth=bad, seed=0)


class TestAddAwgn:
    def test_sigma_zero_is_identity(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, seed=0)
        assert np.array_equal(add_awgn(x, 0.0, seed=1).data, x.data)

    def test_noise_power_concentration(self):
        # chi-square concentration at 10^4 samples; direct-simulation oracle
        x = synth_signal(path_graph(100), 100, bandwidth=0.5, seed=2)
        y = add_awgn(x, 1.0, seed=3)
        sample = float(np.mean(np.abs(y.data - x.data) ** 2))
        assert 0.94 <= sample <= 1.06

    def test_different_seeds_differ(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, seed=0)
        a = add_awgn(x, 0.5, seed=1)
        b = add_awgn(x, 0.5, seed=2)
        assert not np.array_equal(a.data, b.data)

    def test_negative_sigma_rejected(self, bench_ctx):
        x = synth_signal(bench_ctx.spatial, 10, seed=0)
        with pytest.raises(ValueError):
            add_awgn(x, -0.1, seed=0)


class TestMetrics:
    def test_perfect_reconstruction(self, rng):
        a = rng.standard_normal((5, 4))
        m = metrics(a, a.copy())
        assert m.mse == 0.0
        assert math.isinf(m.psnr)
        assert m.ssim == pytest.approx(1.0)

    def test_psnr_zero_db(self):
        a = np.zeros((3, 3))
        a[0, 0] = 255.0
        b = a + 255.0  # mse = 255^2
        m = metrics(a, b, max_value=255.0)
        assert m.psnr == pytest.approx(0.0, abs=1e-12)

    def test_psnr_48db(self, rng):
        # 10*log10(255^2 / 1) computed independently
        a = rng.uniform(0, 255, size=(50, 40))
        noise = rng.standard_normal((50, 40))
        noise *= 1.0 / np.sqrt(np.mean(noise**2))  # unit mse exactly
        m = metrics(a, a + noise, max_value=255.0)
        assert m.psnr == pytest.approx(10 * math.log10(65025.0), abs=0.01)

    def test_mse_matches_definition(self, rng):
        a = rng.standard_normal((6, 7))
        b = rng.standard_normal((6, 7))
        assert metrics(a, b, max_value=1.0).mse == pytest.approx(np.mean((a - b) ** 2))

    def test_ssim_range_and_symmetry(self, rng):
        a = rng.uniform(size=(8, 8))
        b = rng.uniform(size=(8, 8))
        m1 = metrics(a, b, max_value=1.0)
        m2 = metrics(b, a, max_value=1.0)
        assert -1.0 <= m1.ssim <= 1.0
        assert m1.ssim == pytest.approx(m2.ssim)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            metrics(np.zeros((2, 2)), np.zeros((3, 2)))


def tiny_config(**overrides):
    base = dict(
        spatial=GraphSpec(kind="knn_random", n=12, k=3, seed=7),
        temporal=GraphSpec(kind="path", n=6),
        sigma_list=(0.0, 0.8),
        lambda_grid=(0.0, 0.5, 1.0),
        families=("gbfrft2d", "gcgfrft"),
        train=TrainConfig(epochs=25),
        seeds=(0, 1),
    )
    base.update(overrides)
    return BenchmarkConfig(**base)


@pytest.fixture(scope="module")
def report():
    return run_benchmark(tiny_config())


class TestRunBenchmark:
    def test_row_count(self, report):
        cfg = report.config
        want = (len(cfg.families) + len(BASELINE_FAMILIES)) * len(cfg.sigma_list) * len(cfg.seeds)
        assert len(report.rows) == want

    def test_noiseless_rows_are_exact(self, report):
        for seed in (0, 1):
            for family in ("gbfrft2d", "gcgfrft"):
                row = report.row(family, 0.0, seed)
                assert row.status == "ok"
                assert row.mse <= 1e-6

    def test_trained_beats_noisy(self, report):
        for seed in (0, 1):
            noisy = report.row("noisy", 0.8, seed)
            trained = report.row("gcgfrft", 0.8, seed)
            assert trained.mse < noisy.mse

    def test_oracle_baseline_present(self, report):
        row = report.row("closed_form_gft", 0.8, 0)
        assert row.status == "ok" and row.mse >= 0.0

    def test_gcgfrft_learned_lambda_in_grid(self, report):
        row = report.row("gcgfrft", 0.8, 0)
        assert row.lam in (0.0, 0.5, 1.0)

    def test_deterministic_reports(self, report):
        again = run_benchmark(tiny_config())
        for r1, r2 in zip(report.rows, again.rows):
            assert (r1.family, r1.sigma, r1.seed) == (r2.family, r2.sigma, r2.seed)
            assert r1.mse == r2.mse and r1.psnr == r2.psnr and r1.ssim == r2.ssim
            assert r1.alpha == r2.alpha and r1.beta == r2.beta and r1.lam == r2.lam

    def test_threaded_run_matches_serial(self, report):
        threaded = run_benchmark(tiny_config(threads=4))
        for r1, r2 in zip(report.rows, threaded.rows):
            assert r1.mse == r2.mse and r1.alpha == r2.alpha

    def test_config_validation(self):
        with pytest.raises(Exception):
            tiny_config(families=("nope",))
        with pytest.raises(Exception):
            tiny_config(seeds=())
        with pytest.raises(Exception):
            tiny_config(sigma_list=(-1.0,))


class TestVerifyProperties:
    def test_default_suite_passes(self):
        report = verify_properties()
        failed = [r.name for r in report.results if not r.passed]
        assert report.all_passed, f"failed checks: {failed}"

    def test_fault_injection_trips_unitarity(self):
        report = verify_properties(fault_injection=True)
        assert not report.all_passed
        bad = {r.name for r in report.results if not r.passed}
        assert "operator.unitarity_sweep" in bad

    def test_report_formatting(self):
        report = verify_properties(n1_sizes=(4,), n2_sizes=(4,), seeds=(0,))
        text = report.format()
        assert "PASS" in text and "checks passed" in text


class TestRandomPlanarPoints:
    def test_deterministic_and_in_unit_square(self):
        a = random_planar_points(20, seed=3)
        b = random_planar_points(20, seed=3)
        assert np.array_equal(a, b)
        assert a.shape == (20, 2)
        assert np.all((a >= 0) & (a < 1))
