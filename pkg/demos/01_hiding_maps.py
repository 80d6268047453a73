"""
Hiding maps and where the information goes
==========================================

A hiding map sends every input to the same fixed state. Its isometric
dilation shows the input is not destroyed, just moved into the ancilla.
"""

import numpy as np

from switchsim import HidingSpec, PureState, apply, dilate, erasure_spec, hiding_channel, thermal_spec
from switchsim.channels import recover_input, system_marginal

# Three flavours of the same construction: uniform, thermal and erasure.
uniform = HidingSpec.square([0.5, 0.5])
thermal = thermal_spec([0.0, np.log(2.0)], beta=1.0)
erase = erasure_spec(2)
print("thermal spectrum:", thermal.spectrum)

psi = PureState.from_unnormalized(np.array([1.0, 1.0j]))
for name, spec in [("uniform", uniform), ("thermal", thermal), ("erasure", erase)]:
    out = apply(hiding_channel(spec), psi.density())
    print(f"{name:8s} output diag:", np.round(np.diagonal(out.matrix).real, 4))

# The dilation: system ends up in sigma, the last ancilla factor holds psi.
dilated = dilate(thermal, psi)
print("system marginal:\n", np.round(system_marginal(dilated).matrix.real, 4))
back = recover_input(dilated).matrix
print("overlap of recovered input with psi:", np.vdot(psi.amplitudes, back @ psi.amplitudes).real)
