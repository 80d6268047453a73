"""
Masking with the switch
=======================

For a uniform output spectrum neither the system nor the control alone
carries input information, yet the joint state does.
"""

import numpy as np

from switchsim import ControlQubit, HidingSpec, PureState, apply_switch, hiding_channel
from switchsim.metrics import maskable_pair_check, masking_reduced_states
from switchsim.sampling import random_pure_state

rng = np.random.default_rng(7)
ch = hiding_channel(HidingSpec.square(np.ones(3) / 3))
c = ControlQubit(0.5)

states = [random_pure_state(3, rng) for _ in range(5)]
outs = [apply_switch(ch, ch, s.density(), c) for s in states]
marginals = [masking_reduced_states(o) for o in outs]
spread_sys = max(np.abs(m[0].matrix - marginals[0][0].matrix).max() for m in marginals)
spread_ctl = max(np.abs(m[1].matrix - marginals[0][1].matrix).max() for m in marginals)
spread_joint = max(np.abs(o.joint.matrix - outs[0].joint.matrix).max() for o in outs)
print(f"marginal spread: system {spread_sys:.1e}, control {spread_ctl:.1e}; joint spread {spread_joint:.3f}")

# A biased spectrum only masks pairs that differ by phases.
spec = [0.3, 0.7]
psi = PureState(np.array([0.6, 0.8]))
print(maskable_pair_check(spec, psi, PureState(np.array([0.6, -0.8j]))))
print(maskable_pair_check(spec, psi, PureState(np.array([0.8, 0.6]))))
