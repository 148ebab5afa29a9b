"""Error bounds and information yield for reading a binary optical memory.

A memory cell either reflects the signal perfectly (bit 1) or replaces it
with thermal noise (bit 0). The package builds entangled transmitters in a
truncated Fock space, pushes them through both cells, and compares quantum
Chernoff bounds with the best classical (coherent-light) lower bound.
"""

from .channels import ChannelSpec, OutputPair, apply_bit, channel_pair, lossy_channel, readout_pair
from .discrimination import (
    BoundReport,
    ChernoffResult,
    bound_report,
    chernoff_infimum,
    classical_lb_noiseless,
    classical_lb_noisy,
    closed_form_qcb,
    fock_qcb_closed,
    helstrom,
    ln_classical_lb_noiseless,
    ln_classical_lb_noisy,
    mm_qcb_closed,
    psi_qcb_printed,
    qcb_numeric,
    qcb_pure,
    s_overlap,
    scenario_qcb,
)
from .errors import (
    CapacityError,
    ConfigError,
    ConsistencyError,
    NotPSDError,
    QReadingError,
    SpaceMismatchError,
    TruncationError,
    UnsupportedModelError,
)
from .experiments import FIGURES, SweepConfig, load_config, parse_config, reproduce_figure, run_sweep
from .fock import (
    ModeSpace,
    Operator,
    StateVector,
    fidelity_pure,
    fractional_power,
    partial_trace,
    tensor,
    trace_distance,
    trace_norm,
)
from .metrics import InfoReport, binary_entropy, info_report, info_retrieved
from .scenario import ReadoutScenario
from .states import (
    TransmitterSpec,
    TruncationPolicy,
    beamsplitter,
    beamsplitter_5050,
    coherent_state,
    displacement_operator,
    fock_state,
    mm_state,
    photon_coherent_state,
    thermal_state,
)
from .verification import run_verification, verify

__version__ = "0.1.0"
