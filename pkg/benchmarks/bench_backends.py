"""Compare the numba and numpy integrand kernels.

    python benchmarks/bench_backends.py [--nodes 200000] [--repeat 5]

Kernel throughput is measured in-process (both implementations are always
importable). End-to-end ratio timings run in a subprocess per backend,
since ``CASIMIR_TE_BACKEND`` is read at import time.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from casimir_te import kernels
from casimir_te.constants import C_LIGHT
from casimir_te.materials import ConductorParams, DrudeLikePermittivity, permittivity, \
    surface_response_alpha

END_TO_END = (
    "import time; from casimir_te.spectrum import ratio_report; "
    "ratio_report(); t = time.perf_counter(); ratio_report(); "
    "print(time.perf_counter() - t)"
)


def kernel_cases(omega=1e12, a=1e-4):
    eps = permittivity(DrudeLikePermittivity(), omega)
    alpha = surface_response_alpha(ConductorParams(), omega)
    return [
        ("dielectric C1", kernels.PATH_C1, kernels.DIELECTRIC, eps),
        ("dielectric C2", kernels.PATH_C2, kernels.DIELECTRIC, eps),
        ("conductor C1", kernels.PATH_C1, kernels.CONDUCTOR, alpha),
        ("conductor C2", kernels.PATH_C2, kernels.CONDUCTOR, alpha),
    ], omega / C_LIGHT, a


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    t = np.linspace(1e-6, 1.0, args.nodes)
    cases, k0, a = kernel_cases()
    print(f"kernel throughput, {args.nodes} nodes, best of {args.repeat}")
    print(f"{'case':<16s}{'numpy [ms]':>12s}{'numba [ms]':>12s}{'speedup':>9s}")
    for name, path, model, param in cases:
        if kernels.HAVE_NUMBA:
            kernels.integrand_nb(t[:8], path, model, param, k0, a)  # compile
        t_np = min(timeit.repeat(lambda: kernels.integrand_np(t, path, model, param, k0, a),
                                 number=1, repeat=args.repeat))
        if kernels.HAVE_NUMBA:
            t_nb = min(timeit.repeat(lambda: kernels.integrand_nb(t, path, model, param, k0, a),
                                     number=1, repeat=args.repeat))
            print(f"{name:<16s}{1e3 * t_np:12.2f}{1e3 * t_nb:12.2f}{t_np / t_nb:9.2f}")
        else:
            print(f"{name:<16s}{1e3 * t_np:12.2f}{'n/a':>12s}")

    print("\nend-to-end ratio_report (second call, after warm-up)")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, CASIMIR_TE_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True)
        print(f"{backend:<8s}{float(out.stdout):8.3f} s")


if __name__ == "__main__":
    main()
