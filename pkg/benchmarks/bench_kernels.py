"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is timed in a subprocess per backend (EXTPOW_NO_NUMBA toggles it),
after one warm-up call so compilation is excluded.
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from extpow import kernels
from extpow.exterior import ExteriorContext

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
out = {"numba": kernels.numba_enabled()}

def bench(name, fn):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = best

k = 9
ctx = ExteriorContext(9, 3)
g = rng.integers(0, k, (9, 9))
bench("compound_mod (9,3)", lambda: kernels.compound_mod(g, ctx.combos_array, k))
d = rng.integers(0, k, (84, 84))
bench("det_mod 84", lambda: kernels.det_mod(d, k))
p = 7
r = rng.integers(0, p, (200, 300))
bench("rref_mod_p 200x300", lambda: kernels.rref_mod_p(r, p))
print(json.dumps(out))
"""


def run(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["EXTPOW_NO_NUMBA"] = "1"
    else:
        env.pop("EXTPOW_NO_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    jit = run(False, args.repeat)
    ref = run(True, args.repeat)
    print(f"{'kernel':<22} {'numpy (ms)':>11} {'numba (ms)':>11} {'speedup':>8}")
    for name in ref:
        if name == "numba":
            continue
        a, b = ref[name] * 1e3, jit[name] * 1e3
        print(f"{name:<22} {a:>11.2f} {b:>11.2f} {a / b:>7.1f}x")
    if not jit["numba"]:
        print("note: numba not importable, both columns use numpy")


if __name__ == "__main__":
    main()
