"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

from datalimit import _backend, _kernels_py
from datalimit import closed_form as cf
from datalimit.link_model import LinkBudget, MobilityProfile
from datalimit.planner import default_grid_spec, sweep
from datalimit.quadrature import integrate_infinite

try:
    from datalimit import _kernels as _compiled
except ImportError:
    _compiled = None

KERNELS = ("alternating_series", "integrate_span", "shannon_integrand")

CASES = {
    "series S=1.001 (10^4 terms)": lambda: cf.series_sum(1.001, 2.0, cf.SeriesOptions(max_terms=10**4)),
    "integrate_infinite alpha=2": lambda: integrate_infinite(LinkBudget(), MobilityProfile()),
    "integrate_infinite alpha=3 z0=50": lambda: integrate_infinite(
        LinkBudget(path_loss_exp=3.0), MobilityProfile(1.0, 50.0, 5.0)
    ),
    "default v-P sweep (2500 points)": lambda: sweep(default_grid_spec()),
}


def use(module):
    for name in KERNELS:
        setattr(_backend, name, getattr(module, name))


def best_of(fn, repeat):
    number, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the python backend is available")
    print(f"{'case':36s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for label, fn in CASES.items():
        use(_kernels_py)
        t_py = best_of(fn, args.repeat)
        if _compiled is None:
            print(f"{label:36s} {t_py * 1e3:10.3f}ms")
            continue
        use(_compiled)
        t_cy = best_of(fn, args.repeat)
        print(f"{label:36s} {t_py * 1e3:10.3f}ms {t_cy * 1e3:10.3f}ms {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
