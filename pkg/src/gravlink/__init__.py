"""Gravitational effects on photonic quantum links.

Schwarzschild redshift and propagation delay, the induced wavepacket
mode mismatch, and what that mismatch does to single-photon, coherent,
squeezed, entanglement-swapping and homodyne protocols.
"""

from .cvhomodyne import HomodynePrep, HomodyneResult, curvature_invariance_report, homodyne_expectation
from .entangleswap import (
    ClickOutcome,
    FockVector,
    apply_beamsplitter,
    bit_probabilities,
    build_initial_state,
    detect,
    memory_state_closed,
    negativity,
    negativity_closed,
    qber_closed,
    qber_monte_carlo,
)
from .fidelity import coherent_fidelity, single_photon_fidelity, tmss_fidelity
from .scenario import (
    ConfigError,
    ScenarioConfig,
    ScenarioResult,
    load_config,
    paper_table,
    reference_table,
    run_scenario,
    sweep,
)
from .spacetime import (
    C,
    G,
    Body,
    ConvergenceError,
    HorizonError,
    Motion,
    Observer,
    PhotonSphereError,
    ShiftParameter,
    Sign,
    coordinate_travel_time,
    metric_factor,
    proper_time_ratio,
    radius_after,
    redshift_static,
    redshift_total,
    shift_parameter,
    tortoise,
)
from .wavepacket import (
    GaussianPacket,
    OverlapResult,
    TabulatedPacket,
    mismatch_q,
    overlap_gaussian_closed,
    overlap_quadrature,
    propagate_packet,
    read_packet_csv,
    tabulate,
    write_packet_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "G",
    "C",
    "Body",
    "Observer",
    "Motion",
    "Sign",
    "ShiftParameter",
    "HorizonError",
    "PhotonSphereError",
    "ConvergenceError",
    "metric_factor",
    "proper_time_ratio",
    "redshift_static",
    "redshift_total",
    "shift_parameter",
    "tortoise",
    "coordinate_travel_time",
    "radius_after",
    "GaussianPacket",
    "TabulatedPacket",
    "OverlapResult",
    "tabulate",
    "propagate_packet",
    "overlap_quadrature",
    "overlap_gaussian_closed",
    "mismatch_q",
    "read_packet_csv",
    "write_packet_csv",
    "single_photon_fidelity",
    "coherent_fidelity",
    "tmss_fidelity",
    "FockVector",
    "ClickOutcome",
    "build_initial_state",
    "apply_beamsplitter",
    "detect",
    "memory_state_closed",
    "negativity",
    "negativity_closed",
    "bit_probabilities",
    "qber_closed",
    "qber_monte_carlo",
    "HomodynePrep",
    "HomodyneResult",
    "homodyne_expectation",
    "curvature_invariance_report",
    "ConfigError",
    "ScenarioConfig",
    "ScenarioResult",
    "load_config",
    "run_scenario",
    "paper_table",
    "reference_table",
    "sweep",
]
