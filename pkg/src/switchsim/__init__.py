"""Hiding maps under indefinite causal order: simulation and closed-form checks."""

__version__ = "0.1.0"

from .channels import (
    HidingSpec,
    KrausChannel,
    apply,
    apply_on_subsystem,
    dilate,
    erasure_spec,
    hiding_channel,
    nohiding_dilation,
    recover_input,
    thermal_spec,
)
from .entangled import (
    SchmidtPair,
    alpha_closed_form,
    conditional_alpha,
    entanglement_fidelity,
    entanglement_fidelity_closed_form,
    modified_entanglement_fidelity,
    ppt_report,
    switch_on_half,
)
from .errors import (
    ContractError,
    DegenerateOutcomeError,
    DimensionError,
    StructureError,
    SwitchSimError,
    ValidationError,
)
from .metrics import (
    conditional_coherence_closed_form,
    conditional_eigenvalues_closed_form,
    conditional_fidelity_closed_form,
    entropy_and_work,
    fidelity_pure,
    l1_coherence,
    maskable_pair_check,
    masking_reduced_states,
)
from .switch import (
    ControlQubit,
    SwitchOutput,
    apply_switch,
    condition_on_control,
    hiding_switch_closed_form,
    switch_dilation,
    switched_kraus,
)
from .tensor_core import (
    DensityMatrix,
    PureState,
    hermitian_eig,
    partial_trace,
    partial_transpose,
    tensor_product,
)
