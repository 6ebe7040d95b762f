"""Amplitude-damping decoherence of pure and thermally mixed cat states."""

from .decoherence import (
    Curve,
    EvolvedParams,
    NoCrossoverError,
    crossover_time,
    damp_dyadic,
    decay_mixture,
    evolve,
    wigner,
    wigner_min_scan,
    wigner_origin,
)
from .states import (
    DegenerateStateError,
    MqsParams,
    PhasePoint,
    decomposition_weight,
    linear_entropy,
    mean_photon_mixed,
    mean_photon_pure,
    mixed_norm,
    pure_scs_norm,
    thermal_p_weight,
)

__version__ = "0.1.0"
