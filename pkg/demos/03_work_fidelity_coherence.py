"""
What the conditional states are good for
========================================

Fidelity with the input, l1 coherence and extractable work of the
control-conditioned outputs, against the plain hiding output.
"""

import numpy as np

from switchsim import ControlQubit, HidingSpec, PureState, apply_switch, condition_on_control, hiding_channel
from switchsim.metrics import (
    conditional_fidelity_closed_form,
    entropy_and_work,
    fidelity_pure,
    l1_coherence,
)

plus = PureState(np.array([1, 1]) / np.sqrt(2))
spec = HidingSpec.square([0.5, 0.5])
ch = hiding_channel(spec)
out = apply_switch(ch, ch, plus.density(), ControlQubit(0.5))

print(f"sigma: work {entropy_and_work(spec.sigma).work:.4f}, coherence {l1_coherence(spec.sigma):.4f}")
for sign in "+-":
    rho = condition_on_control(out, sign).normalized
    print(f"rho_{sign}: fidelity {fidelity_pure(plus, rho):.4f}, coherence {l1_coherence(rho):.4f}, "
          f"work {entropy_and_work(rho).work:.4f} nats")

# Fidelity as a function of the control weight for a biased spectrum.
psi = PureState.from_unnormalized(np.array([1.0, 2.0]))
biased = [0.2, 0.8]
baseline = float(np.abs(psi.amplitudes) ** 2 @ biased)
for p in np.linspace(0, 1, 5):
    print(f"p={p:.2f}  F={conditional_fidelity_closed_form(biased, psi, p):.4f}  (no switch: {baseline:.4f})")
