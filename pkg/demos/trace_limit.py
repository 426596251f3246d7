"""
The regularised trace and its small-t limit
===========================================

``Tr U(z, t)`` diverges as an ordinary sum but has the Abel value
``e^{-i|z|^2/t} / (1 - e^{it})``. Paired with a Gaussian test function it
tends to the pairing of a delta at the origin, which is 1. The script
computes the pairing in closed form and by quadrature, writes a CSV and,
if matplotlib is installed, plots it.
"""

# %%
import numpy as np

from coherentops import extended_trace_abel, extended_trace_closed, trace_limit_probe, trace_limit_probe_numeric
from coherentops.harness import emit_probe_series

# %%
# Abel summation of the closed-form diagonal against the closed-form trace.
for z in (0.0, 1.0):
    for t in (1.0, 2.5, np.pi):
        diff = abs(extended_trace_abel(z, t) - extended_trace_closed(z, t))
        print(f"z = {z}, t = {t:.4f}: |Abel - closed| = {diff:.1e}")

# %%
# The Gaussian pairing for sigma = 1 as t halves.
ts = 2.0 ** -np.arange(1, 9)
for t in ts:
    probe, target = trace_limit_probe(1.0, t)
    check = trace_limit_probe_numeric(1.0, t) if t >= 0.25 else np.nan
    print(f"t = {t:.5f}   probe = {probe:.6f}   |probe - 1| = {abs(probe - target):.5f}   quadrature = {check:.6f}")

# %%
n = emit_probe_series(1.0, ts, "trace_limit.csv")
print(f"wrote {n} rows to trace_limit.csv")

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    dev = [abs(trace_limit_probe(1.0, t)[0] - 1) for t in ts]
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.loglog(ts, dev, "o-")
    ax.set_xlabel("t")
    ax.set_ylabel("|probe - 1|")
    fig.tight_layout()
    fig.savefig("trace_limit.png", dpi=120)
    print("saved trace_limit.png")
