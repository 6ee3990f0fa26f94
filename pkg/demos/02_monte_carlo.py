"""
Design quality over many random starts
======================================

Each seed gives a different random initial phase vector. The spread of PAPR,
xi and S_min over seeds shows how often a single run lands a usable pulse.
"""

import numpy as np

from ofdm_sar import DesignConfig, monte_carlo_designs

trials = 2000
records, summary = monte_carlo_designs(DesignConfig(), trials)

papr = np.array([r.papr_db for r in records])
xi = np.array([r.xi_db for r in records])
print(f"median PAPR {np.median(papr):.2f} dB, median xi {np.median(xi):.3f} dB")

# joint PAPR / xi table
for row in summary.thresholds:
    if row.table == "papr_xi":
        print(f"PAPR <= {row.papr_max_db} dB and xi >= {row.xi_min_db} dB: {row.count:5d} ({row.fraction:.3f})")

# minimum subcarrier modulus table
for row in summary.thresholds:
    if row.table == "s_min":
        print(f"S_min >= {row.s_min_norm}/sqrt(N): {row.count:5d} ({row.fraction:.3f})")

# the CDF is a step function over the sorted values
x, p = summary.papr_cdf
for level in (2.5, 3.0, 3.5, 4.0):
    print(f"P(PAPR <= {level} dB) = {p[np.searchsorted(x, level, side='right') - 1]:.3f}")
