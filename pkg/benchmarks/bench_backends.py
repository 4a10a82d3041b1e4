"""Time the compiled kernels against the pure-Python twin.

The backend is chosen once at import, so each measurement runs in a child
process with EPRB_BACKEND pinned. Run from the repo root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --n 500000 --repeat 5
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time


def build_tasks(n: int):
    from eprb import (
        LinearStochasticModel,
        LocalSignModel,
        SettingsQuad,
        Z_AXIS,
        chsh_statistic,
        estimate_joint,
        estimate_stochastic_correlation,
        make_correlation_oracle,
        sphere_sampler,
        unit_from_plane_angle,
    )

    s = sphere_sampler(seed=0)
    a = Z_AXIS
    b = unit_from_plane_angle(2.0 * math.pi / 3.0)
    quad = SettingsQuad(
        a=a,
        b=unit_from_plane_angle(math.pi / 4.0),
        a_prime=unit_from_plane_angle(math.pi / 2.0),
        b_prime=unit_from_plane_angle(3.0 * math.pi / 4.0),
    )
    sign_oracle = make_correlation_oracle(LocalSignModel(), s, n)
    return {
        "draw batch": lambda: s.sample_batch(0, n),
        "sign correlation": lambda: sign_oracle(a, b),
        "linear correlation": lambda: estimate_stochastic_correlation(
            LinearStochasticModel(), a, b, s, n
        ),
        "linear joint table": lambda: estimate_joint(
            LinearStochasticModel(), a, b, s, n
        ),
        "chsh statistic": lambda: chsh_statistic(sign_oracle, quad),
    }


def measure(n: int, repeat: int) -> dict[str, float]:
    times = {}
    for name, task in build_tasks(n).items():
        task()  # warm once
        best = math.inf
        for _ in range(repeat):
            start = time.perf_counter()
            task()
            best = min(best, time.perf_counter() - start)
        times[name] = best
    return times


def child_main(n: int, repeat: int) -> int:
    from eprb import BACKEND_NAME

    print(json.dumps({"backend": BACKEND_NAME, "times": measure(n, repeat)}))
    return 0


def run_child(backend: str, n: int, repeat: int):
    env = dict(os.environ, EPRB_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__),
         "--child", "--n", str(n), "--repeat", str(repeat)],
        env=env, capture_output=True, text=True,
    )
    if proc.returncode != 0:
        return None, proc.stderr.strip().splitlines()[-1] if proc.stderr else "failed"
    return json.loads(proc.stdout), None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200000, help="draws per estimate")
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    ns = ap.parse_args(argv)
    if ns.child:
        return child_main(ns.n, ns.repeat)

    results = {}
    for backend in ("python", "compiled"):
        payload, err = run_child(backend, ns.n, ns.repeat)
        if payload is None:
            print(f"{backend}: unavailable ({err})", file=sys.stderr)
        else:
            results[backend] = payload["times"]

    if not results:
        return 1
    width = max(len(k) for times in results.values() for k in times)
    print(f"n = {ns.n}, best of {ns.repeat}")
    header = f"{'task':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    names = list(next(iter(results.values())))
    for name in names:
        py = results.get("python", {}).get(name)
        cy = results.get("compiled", {}).get(name)
        py_s = f"{py:.4f}s" if py is not None else "-"
        cy_s = f"{cy:.4f}s" if cy is not None else "-"
        ratio = f"{py / cy:7.1f}x" if py and cy else "-"
        print(f"{name:<{width}}  {py_s:>10}  {cy_s:>10}  {ratio:>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
