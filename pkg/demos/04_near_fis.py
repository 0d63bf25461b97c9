"""States close to the fastest initial state.

Ratio below one: a three-level family leaves the FIS linearly in delta and
F_MT rises above pi/2 with a stable positive slope. Ratio above one: the
levels {0, 1, 2k+1} family approaches pi/2 from above in F_ML like 1/k.
"""

import math

from nhqsl import analysis, bounds

tau = 0.5
for g in ([0.0, 0.0, 0.0], [0.5, 0.0, 0.2]):
    print(f"ratio 0.8, gamma' = {g}")
    for d in (0.005, 0.01, 0.02):
        m = analysis.near_fis_below_one(g, 0.8, d, tau)
        mt = bounds.f_mt(m.state, m.spectrum, tau).value
        print(f"  delta={d:<6} F_MT - pi/2 = {mt - math.pi / 2:.3e}  slope = {(mt - math.pi / 2) / d:.5f}"
              f"  printed B = {m.b_coefficient:.5f}")

g1, gk, a = 0.1, 0.3, 1.1
print(f"ratio {a}, predicted k (F_ML - pi/2) = {analysis.above_one_coefficient(g1, gk, a, tau):.5f}")
for k in (8, 16, 32, 64):
    m = analysis.near_fis_above_one(g1, gk, k, a, tau)
    ml = bounds.f_ml(m.state, m.spectrum, tau).value
    mt = bounds.f_mt(m.state, m.spectrum, tau).value
    print(f"  k={k:<3} k(F_ML - pi/2) = {k * (ml - math.pi / 2):.5f}  F_MT/predicted = {mt / m.f_mt_predicted:.5f}")
