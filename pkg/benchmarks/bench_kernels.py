"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is timed on identical inputs for every importable backend, and
the outputs are checked for bitwise agreement before any timing is reported.
"""
import argparse
import math
import timeit

import numpy as np

from bellgauge._backend import available_backends
from bellgauge.qstate import JACOBI_MAX_SWEEPS, JACOBI_TOL


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = g + g.conj().T
    return np.ascontiguousarray(h.real), np.ascontiguousarray(h.imag)


def cases(rng):
    h4 = random_hermitian(rng, 4)
    h8 = random_hermitian(rng, 8)
    t = [float(x) for x in rng.uniform(-1, 1, size=9)]
    angles = [math.pi / 3, 0.3, 2 * math.pi / 3, 1.1, math.pi / 4, 2.0, math.pi / 2, 4.0]
    return {
        "jacobi 4x4": lambda k: k.jacobi_eigh(*h4, JACOBI_TOL, JACOBI_MAX_SWEEPS),
        "jacobi 8x8": lambda k: k.jacobi_eigh(*h8, JACOBI_TOL, JACOBI_MAX_SWEEPS),
        "chsh_angles": lambda k: k.chsh_angles(t, angles),
        "refine_angles": lambda k: k.refine_angles(t, angles, 200, 1e-9, 0.5, 1e-10),
    }


def _flatten(out):
    if isinstance(out, (tuple, list)):
        flat = []
        for item in out:
            flat.extend(_flatten(item))
        return flat
    if isinstance(out, np.ndarray) or hasattr(out, "__len__"):
        return [float(x) for x in np.asarray(out).reshape(-1)]
    return [float(out)]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing the Python backend only")
    table = cases(np.random.default_rng(args.seed))

    print(f"{'kernel':<16}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}  identical")
    for label, fn in table.items():
        outputs = {name: _flatten(fn(k)) for name, k in backends.items()}
        ref = outputs["python"]
        same = all(o == ref for o in outputs.values())
        times = {}
        for name, k in backends.items():
            timer = timeit.Timer(lambda k=k: fn(k))
            number, _ = timer.autorange()
            best = min(timer.repeat(repeat=args.repeat, number=number)) / number
            times[name] = best
        row = f"{label:<16}" + "".join(f"{times[n] * 1e6:>11.1f} us" for n in backends)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(row + f"{speed:>9.1f}x  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
