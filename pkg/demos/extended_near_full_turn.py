"""
Extended coherent operators near a full turn
============================================

``U(z, t) = exp(z a^dag - conj(z) a + i t N)`` shrinks to a scalar when ``t``
is a nonzero multiple of ``2 pi``. The matrix-element formula through
``w = f(t) z`` stays finite there because ``f`` enters only as a product.
"""

# %%
import numpy as np

from coherentops import extended_exact, extended_matrix_block, f_of_t, full_turn_value
from coherentops.matrix_core import band_residual, max_entry

z = 1.1 + 0.4j

# %%
# |f(t)| = |sin(t/2) / (t/2)| drops to zero at t = 2 pi.
for t in (np.pi, 2 * np.pi - 1e-2, 2 * np.pi - 1e-4, 2 * np.pi):
    print(f"t = {t:.6f}   |f(t)| = {abs(f_of_t(t)):.3e}")

# %%
# Closed-form elements against the brute-force exponential as t -> 2 pi.
for dt in (1e-1, 1e-2, 1e-4, 1e-6, 0.0):
    t = 2 * np.pi - dt
    err = max_entry(extended_matrix_block(z, t, 20, 20) - extended_exact(z, t, 128)[:21, :21])
    print(f"2 pi - t = {dt:.0e}   max error over n, m <= 20: {err:.1e}")

# %%
# At the full turn the operator is the scalar e^{-i|z|^2/t} on the interior band.
t = 2 * np.pi
U = extended_exact(z, t, 128)
print("scalar:", full_turn_value(z, t))
print("band residual against scalar * I:", band_residual(U, full_turn_value(z, t) * np.eye(128), 32))
