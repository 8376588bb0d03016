"""Time the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both backends
get identical random inputs; the script also checks that their outputs agree
and times one end-to-end crossing count under each backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cubecurrents import kernels
from cubecurrents.fuchsian import standard_rep
from cubecurrents.linking import region, stable_crossings
from cubecurrents.words import parse_word


def _random_sl2(rng: np.random.Generator, n: int) -> np.ndarray:
    a, b, c = rng.normal(size=(3, n))
    a = np.where(np.abs(a) < 0.1, 0.1, a)
    return np.stack([a, b, c, (1 + b * c) / a], axis=1)


def _time(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scan(rng, repeat: int) -> dict:
    mats = _random_sl2(rng, 20000)
    arcs = rng.normal(size=(200, 4))
    out = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        out[name] = (_time(lambda: kernels.scan_crossings(mats, arcs, -3.0, 3.0, 1e-12), repeat),
                     kernels.scan_crossings(mats, arcs, -3.0, 3.0, 1e-12))
    return out


def bench_path(rng, repeat: int) -> dict:
    # a long segment of the imaginary axis plus a transverse one
    frames = np.array([[1.0, 0.0, 0.0, 1.0], [0.6, 0.8, -0.8, 0.6]])
    lengths = np.array([6.0, 2.0])
    z = rng.normal(size=5000) + 1j * np.abs(rng.normal(size=5000)) + 0.05j
    out = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        out[name] = (_time(lambda: kernels.path_distance(z.real, z.imag, frames, lengths), repeat),
                     kernels.path_distance(z.real, z.imag, frames, lengths))
    return out


def bench_end_to_end(repeat: int) -> dict:
    rep = standard_rep(2)
    h, c = parse_word("a1 b1", 2), parse_word("a1 a2 b2 B1", 2)
    out = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        region.cache_clear()
        out[name] = (_time(lambda: (region.cache_clear(), stable_crossings(rep, h, c)), repeat),
                     len(stable_crossings(rep, h, c).crossings))
    return out


def _agree(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_agree(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.shape == b.shape and np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)
    return a == b


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    initial = kernels.backend()
    rows = [("scan_crossings 20000x200", bench_scan(rng, args.repeat)),
            ("path_distance 5000 pts", bench_path(rng, args.repeat)),
            ("stable_crossings a1b1 / a1a2b2B1", bench_end_to_end(args.repeat))]
    kernels.use_backend(initial)
    names = kernels.available_backends()
    print(f"{'kernel':<36}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}{'agree':>8}")
    for label, res in rows:
        times = [res[n][0] for n in names]
        speed = f"{times[0] / times[-1]:.1f}x" if len(names) > 1 else "-"
        agree = all(_agree(res[names[0]][1], res[n][1]) for n in names[1:])
        print(f"{label:<36}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + f"{speed:>10}{str(agree):>8}")


if __name__ == "__main__":
    main()
