"""Compare the numba and numpy kernel backends on the counting hot paths.

    python benchmarks/bench_kernels.py [--repeat 3]

Each row reports the best-of-``repeat`` wall time per backend and checks
that both backends return the same count. Numba compilation is paid in a
warm-up call and not timed.
"""

import argparse
import time

from extremal import kernels
from extremal.counting import count_bruteforce, count_difference_structure, count_solved
from extremal.grid import GridSpec
from extremal.polyring import parse_poly

F_MAIN = parse_poly("(x-y)^2 + x - z", ["x", "y", "z"])
CUBIC = parse_poly("x^3 - 2*x*y*z + y^2 - 7", ["x", "y", "z"])
V = parse_poly("(x-y)^2 + s - t", ["x", "y", "s", "t"])

CASES = [
    ("bruteforce MainF [1,256]^3", lambda b: count_bruteforce(F_MAIN, GridSpec.cube(1, 256, 3), backend=b)),
    ("bruteforce cubic [-60,60]^3", lambda b: count_bruteforce(CUBIC, GridSpec.cube(-60, 60, 3), backend=b)),
    ("solved MainF [1,2048]^3", lambda b: count_solved(F_MAIN, GridSpec.cube(1, 2048, 3), "z", backend=b)),
    ("solved Valtr [1,64]^4", lambda b: count_solved(V, GridSpec.cube(1, 64, 4), "t", backend=b)),
    ("solved MainF explicit z", lambda b: count_solved(F_MAIN, GridSpec.parse(
        "1..1500,1..1500,{" + ",".join(str(v) for v in range(1, 3000, 7)) + "}"), "z", backend=b)),
    ("difference MainF n=2^22", lambda b: count_difference_structure("MainF", 2**22, backend=b)),
]


def best(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result.count


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'case':32} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  count")
    for name, case in CASES:
        case("numba")  # compile
        t_np, c_np = best(lambda: case("numpy"), args.repeat)
        t_nb, c_nb = best(lambda: case("numba"), args.repeat)
        if c_np != c_nb:
            raise SystemExit(f"{name}: backends disagree ({c_np} vs {c_nb})")
        print(f"{name:32} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x  {c_nb}")


if __name__ == "__main__":
    main()
