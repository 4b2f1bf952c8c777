"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_backends.py [--k 40000] [--reps 5]

Times each kernel on identical inputs, then an end-to-end limit-mode query
in two subprocesses (one with GENLOGIC_PURE_PYTHON=1).
"""
import argparse
import json
import os
import random
import subprocess
import sys
import timeit
from array import array

from genlogic import _kernels_py, kernels

END_TO_END = """
import json, sys, timeit
from genlogic import bench, engine, kernels
K = int(sys.argv[1]); reps = int(sys.argv[2])
ds = bench.synthetic_dataset(K, 24, 4)
omega, delta = bench.synthetic_query(24, 4)
engine.conditional(ds, omega, delta)
t = timeit.Timer(lambda: engine.conditional(ds, omega, delta))
n, _ = t.autorange()
print(json.dumps({"backend": kernels.BACKEND, "seconds": min(t.repeat(reps, n)) / n}))
"""


def kernel_inputs(K, n_local, seed=0):
    rng = random.Random(seed)
    ids = array("i", (rng.randrange(n_local) for _ in range(K)))
    truth = bytearray(rng.getrandbits(1) for _ in range(n_local))
    counts = array("i", (rng.randrange(7) for _ in range(K)))
    return ids, truth, counts


def time_kernels(backend, K, reps):
    ids, truth, counts = kernel_inputs(K, max(1, K // 4))
    _, mask, _ = backend.argmax(counts)
    flags = bytes(truth)
    packed = backend.pack_bits(flags)
    cases = {
        "accumulate": lambda: backend.accumulate(array("i", counts), ids, truth),
        "argmax": lambda: backend.argmax(counts),
        "equal_mask": lambda: backend.equal_mask(counts, 3),
        "masked_count_equal": lambda: backend.masked_count_equal(mask, counts, 3),
        "pack_bits": lambda: backend.pack_bits(flags),
        "unpack_bits": lambda: backend.unpack_bits(packed, len(flags)),
    }
    out = {}
    for name, fn in cases.items():
        t = timeit.Timer(fn)
        n, _ = t.autorange()
        out[name] = min(t.repeat(reps, n)) / n
    return out


def end_to_end(K, reps, pure):
    env = dict(os.environ)
    env.pop("GENLOGIC_PURE_PYTHON", None)
    if pure:
        env["GENLOGIC_PURE_PYTHON"] = "1"
    proc = subprocess.run([sys.executable, "-c", END_TO_END, str(K), str(reps)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--k", type=int, default=40_000)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args(argv)

    if kernels.compiled_backend is None:
        print("compiled extension not built; only the fallback is available")
        backends = {"python": _kernels_py}
    else:
        backends = {"compiled": kernels.compiled_backend, "python": _kernels_py}

    results = {name: time_kernels(b, args.k, args.reps) for name, b in backends.items()}
    print(f"kernels at K={args.k} (best of {args.reps}, microseconds)")
    print(f"{'kernel':<20}" + "".join(f"{n:>12}" for n in backends) + f"{'speedup':>10}")
    for kernel in results["python"]:
        row = [results[n][kernel] for n in backends]
        speed = f"{row[-1] / row[0]:>9.1f}x" if len(row) == 2 else ""
        print(f"{kernel:<20}" + "".join(f"{x * 1e6:>12.1f}" for x in row) + speed)

    print()
    print(f"end-to-end limit query, K={args.k}, 24 atoms, T=4")
    runs = [end_to_end(args.k, args.reps, pure) for pure in (False, True)]
    for r in runs:
        print(f"  {r['backend']:<9} {r['seconds'] * 1e3:8.3f} ms")
    if runs[0]["backend"] != runs[1]["backend"]:
        print(f"  speedup   {runs[1]['seconds'] / runs[0]['seconds']:8.1f}x")


if __name__ == "__main__":
    main()
