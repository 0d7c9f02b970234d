"""Timing comparison between the compiled kernels and the pure-python
fallback on the two hot paths: fixed-step propagation of the master
equation and the filtered measurement-rate integral.

The propagation is timed at two sampling strides. With coarse sampling the
pure fallback can fold whole blocks of steps into a matrix power and wins;
with per-step sampling the compiled loop wins.

Run with: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from iondecoh import _purecore
from iondecoh.rates import zeno_panel_edges
from iondecoh.spectral import calibrate

try:
    from iondecoh import _fastcore
except ImportError:
    _fastcore = None


def _time(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rk4(n_steps, sample_every):
    rng = np.random.default_rng(7)
    a = rng.normal(size=(6, 6)) * 0.05
    y0 = np.zeros(6)
    y0[0] = 1.0

    def run(backend):
        return _time(lambda: backend.rk4_path(a, y0, n_steps, 1e-5,
                                              sample_every))
    return run


def bench_zeno(backend):
    params = calibrate(1.0, 1000.0, 10.0)
    t_c = 2.0 * np.pi / 0.5
    edges = zeno_panel_edges(t_c, params)
    v0_sq = params.v0 * params.v0
    return _time(lambda: backend.zeno_rate_pair(
        t_c, params.omega3p, v0_sq, params.omega_c, params.beta, edges))


def main():
    workloads = (
        ("rk4_path stride=100", bench_rk4(400_000, 100)),
        ("rk4_path stride=1", bench_rk4(100_000, 1)),
        ("zeno_rate_pair", bench_zeno),
    )
    rows = [("kernel", "pure [s]", "fast [s]", "speedup")]
    for name, worker in workloads:
        pure_t = worker(_purecore)
        if _fastcore is None:
            rows.append((name, "%.4f" % pure_t, "unavailable", "-"))
        else:
            fast_t = worker(_fastcore)
            rows.append((name, "%.4f" % pure_t, "%.4f" % fast_t,
                         "%.1fx" % (pure_t / fast_t)))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


if __name__ == "__main__":
    main()
