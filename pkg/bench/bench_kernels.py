"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is made at import
time from HERMLAT_DISABLE_NUMBA. Usage:

    python bench/bench_kernels.py            # both backends, summary table
    python bench/bench_kernels.py --worker   # one backend, JSON timings
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = [
    # (D, n, parity) with D the squarefree field parameter
    (-3, 4, "odd"),
    (-3, 5, "odd"),
    (-1, 4, "even"),
    (-1, 6, "odd"),
    (-2, 6, "even"),
    (-22, 4, "even"),
    (-5, 4, "odd"),
]


def worker(repeat: int) -> dict:
    from hermlat import _kernels
    from hermlat.autgroup import full_count, lll_transform, orbit_product, prepare_search, short_vectors
    from hermlat.field import make_field
    from hermlat.genus import GenusSym, sample_lattice
    from hermlat.lattice import zbasis_and_trace_gram

    out = {"numba": _kernels.USE_NUMBA, "cases": []}
    # warm up (includes JIT compilation when numba is on)
    t = time.perf_counter()
    S0 = prepare_search(sample_lattice(GenusSym(make_field(-1), "odd", 2, (1,))))
    orbit_product(S0)
    full_count(S0)
    out["warmup_s"] = time.perf_counter() - t
    for D, n, par in CASES:
        F = make_field(D)
        L = sample_lattice(GenusSym(F, par, n, (1,) * F.t))
        Z = zbasis_and_trace_gram(L)
        T = lll_transform(Z.gram)
        R = T @ Z.gram @ T.T
        bound = int(R.diagonal().max()) + 2
        S = prepare_search(L)
        order = orbit_product(S)
        best = {"aut_order": order}
        for name, fn in [
            ("short_vectors", lambda: short_vectors(R, bound)),
            ("orbit_stab", lambda: orbit_product(S)),
            ("full_count", lambda: full_count(S) if order <= 50000 else None),
        ]:
            times = []
            for _ in range(repeat):
                t = time.perf_counter()
                fn()
                times.append(time.perf_counter() - t)
            best[name] = min(times)
        if order > 50000:
            best["full_count"] = None
        out["cases"].append({"D": D, "n": n, "parity": par, **best})
    return out


def run_backend(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["HERMLAT_DISABLE_NUMBA"] = "1"
    else:
        env.pop("HERMLAT_DISABLE_NUMBA", None)
    res = subprocess.run(
        [sys.executable, __file__, "--worker", "--repeat", str(repeat)],
        env=env, check=True, capture_output=True, text=True,
    )
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"warm-up: numba {fast['warmup_s']:.2f}s, numpy {slow['warmup_s']:.2f}s")
    print(f"{'case':<16}{'|U(L)|':>9}  {'kernel':<14}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for a, b in zip(fast["cases"], slow["cases"]):
        assert a["aut_order"] == b["aut_order"], "backends disagree"
        label = f"{a['D']} {a['parity']} n={a['n']}"
        for k in ("short_vectors", "orbit_stab", "full_count"):
            if a[k] is None:
                continue
            ta, tb = a[k] * 1e3, b[k] * 1e3
            print(f"{label:<16}{a['aut_order']:>9}  {k:<14}{ta:>10.2f}{tb:>10.2f}{tb / ta:>8.1f}x")


if __name__ == "__main__":
    main()
