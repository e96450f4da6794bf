import warnings

import numpy as np
import pytest

from xigemm.calibrate import calibrate_eta, machine_fingerprint, random_csr, time_call
from xigemm.config import read_config, write_config


def test_stub_cost_model_gives_one():
    cal = calibrate_eta(time_gemm=lambda: 1000.0, time_spmm=lambda d: d * 1000.0)
    assert cal.eta == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("cross", [0.001, 0.3, 0.75])
def test_bisection_finds_crossover(cross):
    # spmm cost d / cross * gemm: equal at d = cross
    cal = calibrate_eta(time_gemm=lambda: 1.0, time_spmm=lambda d: d / cross, tol=1e-4)
    assert cal.eta == pytest.approx(cross, abs=2e-4)
    assert 0 < cal.eta <= 1


def test_spmm_never_faster():
    cal = calibrate_eta(time_gemm=lambda: 1.0, time_spmm=lambda d: 10.0)
    assert cal.eta == pytest.approx(1e-4)


def test_measured_eta_in_range():
    cal = calibrate_eta(size=64, tol=0.05)
    assert 0 < cal.eta <= 1
    assert cal.gemm_ns > 0 and cal.samples


def test_time_call_coarse_warning(monkeypatch):
    import time as _time
    info = _time.get_clock_info("perf_counter")

    class Coarse:
        resolution = 1.0  # one second: anything short is too coarse
        implementation, monotonic, adjustable = info.implementation, info.monotonic, info.adjustable

    monkeypatch.setattr(_time, "get_clock_info", lambda name: Coarse)
    with pytest.warns(RuntimeWarning, match="coarse"):
        assert time_call(lambda: None, min_ns=10_000, max_reps=64) >= 0


def test_time_call_quiet_normally():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        time_call(lambda: sum(range(1000)))


def test_random_csr_density(rng):
    s = random_csr(200, 200, 0.1, rng)
    assert 0.08 < s.nnz / 40000 < 0.12
    assert s.values.dtype == np.int8 and np.all(s.values != 0)


def test_fingerprint_keys():
    assert {"machine", "numpy", "kernels"} <= set(machine_fingerprint())


def test_config_round_trip(tmp_path):
    p = tmp_path / "x.cfg"
    write_config(p, {"eta": 0.31, "threshold": 0.5}, {"machine": "x86_64"})
    assert read_config(p) == {"eta": 0.31, "threshold": 0.5, "density_limit": 0.31}
    write_config(p, {"eta": 0.3, "density_limit": 0.2})
    assert read_config(p)["density_limit"] == 0.2
    with pytest.raises(FileNotFoundError):
        read_config(tmp_path / "missing.cfg")
