"""
Ordered products and where float64 runs out
===========================================

The coherent operator ``U(z)`` can be written as a scalar times two
triangular exponentials, creation factor first or annihilation factor first.
Multiplied out, each matrix entry is an alternating sum. This script shows
how large those sums get and what the library does about it.
"""

# %%
import numpy as np

from coherentops import DisentangleForm, TruncationConfig, displacement_disentangled, displacement_exact
from coherentops.matrix_core import band_residual, expm_ladder

cfg = TruncationConfig(dim=128, band=32)
z = 2.0 * np.exp(0.9j)

# %%
# Plain float64 product of the two triangular factors, annihilation first.
# Each entry sums terms far larger than the result.
x = abs(z) ** 2
left = expm_ladder(-np.conj(z), cfg.dim, raising=False)
right = expm_ladder(z, cfg.dim, raising=True)
naive = np.exp(x / 2) * (left @ right)
exact = displacement_exact(z, cfg)
print("largest single term in entry (31, 31):", np.exp(x / 2) * np.abs(left[31] * right[:, 31]).max())
print("float64 product, band residual:      ", band_residual(naive, exact, cfg.band))

# %%
# The library recomputes the band block in double-double arithmetic.
for form in DisentangleForm:
    err = band_residual(displacement_disentangled(z, cfg, form), exact, cfg.band)
    print(f"{form.value:>10s} ordering, band residual: {err:.2e}")

# %%
# Residual against |z|; the naive product degrades as exp(|z|^2) while the
# refined one stays at rounding level.
for r in (0.5, 1.0, 1.5, 2.0, 2.5):
    zz = r * np.exp(0.9j)
    ref = displacement_exact(zz, cfg)
    L = expm_ladder(-np.conj(zz), cfg.dim, raising=False)
    R = expm_ladder(zz, cfg.dim, raising=True)
    plain = band_residual(np.exp(r**2 / 2) * (L @ R), ref, cfg.band)
    refined = band_residual(displacement_disentangled(zz, cfg, "antinormal"), ref, cfg.band)
    print(f"|z| = {r:3.1f}   float64 {plain:.1e}   refined {refined:.1e}")
