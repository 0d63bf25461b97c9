"""Which two-level bound is tighter, scanned over the (theta, alpha) plane.

The canonical pair has gap mu + i nu = cos(theta) + i sin(theta). For each
state angle alpha we compare the geometric bound tau_G with the combined
ML/MT bound. Region A: tau_G tighter, B: combined tighter, C: tau_G has no
solution. Prints a coarse character map (rows theta, columns alpha).
"""

import numpy as np

from nhqsl.analysis import delta_tau_scan

n = 40
th = (np.arange(n) + 0.5) * np.pi / n
al = (np.arange(n) + 0.5) * (np.pi / 2) / n
cells = delta_tau_scan(th, al)
grid = np.array([c.region.value for c in cells]).reshape(n, n)
for i in range(0, n, 2):
    print(f"theta={th[i]:5.3f} " + "".join(grid[i]))
for r in "ABC":
    print(r, int((grid == r).sum()))
finite = [c.delta_tau for c in cells if c.delta_tau is not None and np.isfinite(c.delta_tau)]
print(f"delta tau range over finite cells: [{min(finite):.4f}, {max(finite):.4f}]")
