"""Quantum Fisher metric, state-distinguishability densities (IDQS), and
per-channel information flow (IDF/RIDF) for open quantum systems."""

from idflow._core import (
    DissipativeModel,
    FlowRecord,
    anticommutator,
    bloch_idqs,
    bloch_state,
    commutator,
    dissipative_flow_records,
    flow_series_bloch,
    hermitian_eig,
    idqs,
    parse_config,
    qfm,
    ridf_pipeline,
    run,
    sld,
    validate_density,
)

__all__ = [
    "DissipativeModel",
    "FlowRecord",
    "anticommutator",
    "bloch_idqs",
    "bloch_state",
    "commutator",
    "dissipative_flow_records",
    "flow_series_bloch",
    "hermitian_eig",
    "idqs",
    "parse_config",
    "qfm",
    "ridf_pipeline",
    "run",
    "sld",
    "validate_density",
]

__version__ = "0.1.0"
