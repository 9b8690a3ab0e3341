"""Photon statistics of a single two-level emitter ultrastrongly coupled to
a one-mode resonator: dressed spectra, interference-resolved zero-delay
correlations, and driven-dissipative dynamics in the dressed picture.
"""

__version__ = "0.1.0"

from .correlations import (
    ChannelDecomposition,
    ChannelTerm,
    g2_zero_eigenstate,
    g2_zero_superposition,
    sweep_g2_zero,
)
from .dynamics import (
    CorrelationSeries,
    DensityState,
    JumpTerm,
    LindbladGenerator,
    build_liouvillian,
    evolve,
    g2_tau,
    steady_g2_zero,
    steady_state,
    sweep_g2_drive,
)
from .engine import BACKEND, available_backends
from .models import (
    SystemParams,
    build_drive_operator,
    build_emission_operator,
    build_hamiltonian,
    parity_operator,
)
from .operators import (
    EigenDecomposition,
    OperatorMatrix,
    eig_hermitian,
    fock_annihilation,
    solve_linear,
    tensor,
)
from .spectrum import (
    DressedBasis,
    PositiveFrequencyOperator,
    continuation_sweep,
    diagonalize_labeled,
    find_crossing,
    positive_frequency,
)

__all__ = [
    "BACKEND",
    "ChannelDecomposition",
    "ChannelTerm",
    "CorrelationSeries",
    "DensityState",
    "DressedBasis",
    "EigenDecomposition",
    "JumpTerm",
    "LindbladGenerator",
    "OperatorMatrix",
    "PositiveFrequencyOperator",
    "SystemParams",
    "available_backends",
    "build_drive_operator",
    "build_emission_operator",
    "build_hamiltonian",
    "build_liouvillian",
    "continuation_sweep",
    "diagonalize_labeled",
    "eig_hermitian",
    "evolve",
    "find_crossing",
    "fock_annihilation",
    "g2_tau",
    "g2_zero_eigenstate",
    "g2_zero_superposition",
    "parity_operator",
    "positive_frequency",
    "solve_linear",
    "steady_g2_zero",
    "steady_state",
    "sweep_g2_drive",
    "sweep_g2_zero",
    "tensor",
]
