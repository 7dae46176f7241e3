#!/usr/bin/env python3
"""Spin spectrum against the discretized double-well operator at N=1000.

The first ten eigenvalues of J/N agree with those of the uniform-grid
discretization of -(1/(LN))^2 d^2/dy^2 + V(y) to a few parts in 1e6,
which is the whole point of the change of variable y = D(x)/L."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cwlab import (
    ModelParams,
    build_schrodinger_tridiag,
    build_tridiag_cw,
    eig_lowest,
    scale,
    spectrum_compare,
)

N, B, K = 1000, 0.5, 10

lam = eig_lowest(
    scale(build_tridiag_cw(ModelParams(N=N, B=B)), 1.0 / N), K, want_vectors=False
).eigenvalues
eps = eig_lowest(build_schrodinger_tridiag(N, B), K, want_vectors=False).eigenvalues
diffs, worst = spectrum_compare(lam, eps, K)

print(f"{'n':>2} {'lambda_n (spin)':>18} {'eps_n (grid)':>18} {'|diff|':>12}")
for n in range(K):
    print(f"{n:>2} {lam[n]:>18.10f} {eps[n]:>18.10f} {diffs[n]:>12.4e}")
print(f"max |lambda - eps| = {worst:.4e}")

fig, ax = plt.subplots(figsize=(6.5, 4))
ax.semilogy(np.arange(K), diffs, "o-")
ax.set_xlabel("level n")
ax.set_ylabel("|lambda_n - eps_n|")
ax.set_title(f"Spin matrix vs discretized operator, N={N}, B={B}")
ax.grid(True, which="both", alpha=0.4)
fig.tight_layout()
fig.savefig("demo_schrodinger_comparison.png", dpi=150)
print("wrote demo_schrodinger_comparison.png")
