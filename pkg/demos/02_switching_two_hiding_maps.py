"""
Two hiding maps in a superposition of orders
============================================

Each map alone forgets the input. Put two of them in the switch and the
control qubit picks up a term that still depends on it.
"""

import numpy as np

from switchsim import ControlQubit, HidingSpec, PureState, apply_switch, condition_on_control, hiding_channel
from switchsim.switch import hiding_switch_closed_form

spec = HidingSpec.square([0.3, 0.7])
ch = hiding_channel(spec)
c = ControlQubit(0.5)

psi = PureState.from_unnormalized(np.array([1.0, 1.0]))
brute = apply_switch(ch, ch, psi.density(), c)
closed = hiding_switch_closed_form(spec, psi.density(), c)
print("brute force vs closed form:", np.max(np.abs(brute.joint.matrix - closed.joint.matrix)))

# Measure the control in the |+>, |-> basis.
for sign in "+-":
    cond = condition_on_control(brute, sign)
    print(f"outcome {sign}: prob {cond.prob:.4f}")
    print(np.round(cond.normalized.matrix, 4))

# Two inputs, two different joint outputs.
other = PureState(np.array([1.0, 0.0]))
diff = brute.joint.matrix - apply_switch(ch, ch, other.density(), c).joint.matrix
print("largest difference between outputs:", np.abs(diff).max())
