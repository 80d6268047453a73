"""
Switching on half of an entangled pair
======================================

Hiding maps on B with a switched order. The conditional two-qubit states
stay separable, and the entanglement fidelity surface over (c0, p0) is
easy to tabulate.
"""

import numpy as np

from switchsim import ControlQubit
from switchsim.entangled import (
    ClosedFormParams,
    SchmidtPair,
    conditional_alpha,
    entanglement_fidelity_surface,
    modified_entanglement_fidelity,
    ppt_report,
    switch_on_half,
)
from switchsim.tensor_core import DensityMatrix

pair = SchmidtPair(2**-0.5, 2**-0.5)
print("Bell state, PPT min eigenvalue:", ppt_report(pair.density()).min_eigenvalue)

alpha = conditional_alpha(switch_on_half(pair, [0.5, 0.5], ControlQubit(0.5)), "+")
report = ppt_report(alpha.alpha, ClosedFormParams(pair, [0.5, 0.5], 0.5, "+"))
print("after the switch:", np.round(report.eigenvalues, 4), "separable:", report.separable)

# Coarse view of the surface; rows are c0, columns p0.
surf = entanglement_fidelity_surface(6, 6)
print(np.array2string(surf, precision=3, suppress_small=True))

normalized = DensityMatrix(alpha.alpha.matrix / alpha.prob, (2, 2))
best = modified_entanglement_fidelity(pair, normalized)
print(f"F_e' = {best.value:.4f} at angles {np.round(best.params, 3)}")
