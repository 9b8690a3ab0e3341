"""Benchmark: compiled vs pure-NumPy propagation kernel.

Propagates an operator-seeded state under a driven-system generator (the
hot loop behind delayed correlations and the explicit-drive oracle) at two
truncation sizes and reports wall time, speedup and the deviation between
the two backends.

Run:  python3 benchmarks/bench_propagation.py
"""

import time

import numpy as np

from uscqed import engine, models
from uscqed.dynamics import build_liouvillian, steady_state, vectorize
from uscqed.models import SystemParams
from uscqed.spectrum import diagonalize_labeled, positive_frequency


def setup(n_levels):
    p = SystemParams(
        delta=0.5,
        epsilon=0.35,
        lam=0.2,
        n_max=16,
        kappa=5e-4,
        gamma=5e-4,
        drive_amplitude=1.25e-4,
    )
    basis = diagonalize_labeled(p)
    p = p.with_(drive_frequency=basis.transition_frequency("0", "1+"))
    gen = build_liouvillian(basis, p, n_levels=n_levels, spectral_weight="flat")
    rho = steady_state(gen)
    oplus = positive_frequency(
        models.build_emission_operator(p, "i_theta"), basis, derivative_order=1
    )
    op = oplus.matrix[:n_levels, :n_levels]
    seed = op @ rho.matrix @ op.conj().T
    y0 = vectorize(seed / np.trace(seed).real)
    return gen.superoperator, y0


def run(span=4000.0, rtol=1e-9):
    names = engine.available_backends()
    if len(names) < 2:
        print("compiled kernel not built; benchmarking the python kernel only")
    taus = np.linspace(0.0, span, 41)
    print(f"propagation span {span:g} (1/omega_c), rtol {rtol:g}, {len(taus)} samples")
    header = f"{'case':>18} | " + " | ".join(f"{n:>12}" for n in names) + " | speedup | max deviation"
    print(header)
    print("-" * len(header))
    for n_levels in (6, 12):
        L, y0 = setup(n_levels)
        times = {}
        results = {}
        for name in names:
            kern = engine.get_kernel(name)
            t0 = time.perf_counter()
            results[name] = kern.propagate(L, y0, taus, rtol, 1e-12)
            times[name] = time.perf_counter() - t0
        if len(names) == 2:
            speedup = times["python"] / times["compiled"]
            dev = np.abs(results["compiled"] - results["python"]).max()
        else:
            speedup, dev = float("nan"), 0.0
        dim = n_levels * n_levels
        cells = " | ".join(f"{times[n]:>10.3f}s" for n in names)
        print(f"{dim:>7} x {dim:<8} | {cells} | {speedup:>6.1f}x | {dev:.2e}")


if __name__ == "__main__":
    run()
