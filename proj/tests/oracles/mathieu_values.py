# Combined (periodic + antiperiodic) eigenvalues of -y'' - 2 cos(2 pi x) y on [0, 1],
# from Mathieu characteristic values with z = pi x, q = 1/pi^2, lambda = pi^2 a.
# The sign of the potential is irrelevant (shift x by 1/2).
import numpy as np
from scipy.special import mathieu_a, mathieu_b

q = 1.0 / np.pi**2
vals = [mathieu_a(0, q)]
for m in range(1, 30):
    vals += [mathieu_a(m, q), mathieu_b(m, q)]
vals = sorted(np.pi**2 * np.array(vals))[:20]
print(",\n".join(f"    {v:.17g}" for v in vals))
