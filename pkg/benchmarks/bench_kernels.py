"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times im2col, col2im, the fused moment update, and a full Q-network
training step under each backend, and checks that both backends agree.
"""

import argparse
import importlib
import os
import subprocess
import sys
import timeit

import numpy as np

from symdqn.autodiff import _pykernels

try:
    from symdqn.autodiff import _ckernels
except ImportError:
    _ckernels = None

CASES = {
    # name: (input shape, kernel, stride)
    "qnet conv1 b16": ((16, 1, 50, 50), 5, 2),
    "qnet conv2 b16": ((16, 16, 23, 23), 3, 2),
    "recognizer conv1 b6": ((6, 1, 10, 10), 3, 1),
}


def bench(fn, repeat):
    times = timeit.repeat(fn, number=1, repeat=repeat)
    return min(times) * 1e3


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for name, (shape, k, s) in CASES.items():
        x = rng.standard_normal(shape)
        cols = _pykernels.im2col(x, k, k, s)
        for op, args in (("im2col", (x, k, k, s)), ("col2im", (cols, shape, k, k, s))):
            py = bench(lambda: getattr(_pykernels, op)(*args), repeat)
            if _ckernels is not None:
                cy = bench(lambda: getattr(_ckernels, op)(*args), repeat)
                same = np.array_equal(getattr(_pykernels, op)(*args), getattr(_ckernels, op)(*args))
            else:
                cy, same = float("nan"), None
            rows.append((f"{op} {name}", py, cy, same))
    n = 1_030_000
    arrays = [rng.standard_normal(n) for _ in range(2)] + [np.zeros(n), np.zeros(n)]

    def adam(mod):
        p, g, m, v = (a.copy() for a in arrays)
        mod.adam_update(p, g, m, v, 1e-4, 0.9, 0.999, 0.1, 0.001, 1e-8, 1.0)
        return p

    py = bench(lambda: adam(_pykernels), repeat)
    cy = bench(lambda: adam(_ckernels), repeat) if _ckernels else float("nan")
    same = np.array_equal(adam(_pykernels), adam(_ckernels)) if _ckernels else None
    rows.append(("moment update 1.03M params", py, cy, same))
    return rows


STEP_SNIPPET = """
import time, numpy as np
from symdqn.dqn import QNetwork, TrainerConfig, ReplayMemory, make_optimizer, td_train_step
rng = np.random.default_rng(0)
net, tgt = QNetwork(rng), QNetwork(rng)
cfg = TrainerConfig(); opt = make_optimizer(net, cfg)
mem = ReplayMemory()
for i in range(32):
    mem.push(rng.random((1, 50, 50)), i % 4, 0.0, rng.random((1, 50, 50)), False)
batch = mem.sample(16, rng)
td_train_step(net, tgt, batch, cfg, opt)
best = 1e9
for _ in range({repeat}):
    t = time.perf_counter(); td_train_step(net, tgt, batch, cfg, opt)
    best = min(best, time.perf_counter() - t)
print(best * 1e3)
"""


def train_step_ms(pure, repeat):
    env = dict(os.environ, SYMDQN_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", STEP_SNIPPET.format(repeat=repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    kernels = importlib.import_module("symdqn.autodiff.kernels")
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'case':40s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}  identical")
    for name, py, cy, same in kernel_table(args.repeat):
        print(f"{name:40s} {py:10.3f} {cy:10.3f} {py / cy:8.2f}x  {same}")
    py = train_step_ms(True, args.repeat)
    cy = train_step_ms(False, args.repeat) if _ckernels else float("nan")
    print(f"{'td train step b16 (end to end)':40s} {py:10.3f} {cy:10.3f} {py / cy:8.2f}x")


if __name__ == "__main__":
    main()
