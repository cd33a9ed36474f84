"""Geometric discord, Bell violation, teleportation fidelity and negativity
for two-qubit and d x d states."""

from .correlations import (
    BlochForm,
    CorrelationReport,
    Regime,
    TheoremAudit,
    audit_theorems,
    bloch_decompose,
    classify_regime,
    discord_bounds,
    full_report,
    geometric_discord,
    horodecki_m,
    negativity2,
    teleportation_fidelity,
    u_value,
)
from .dynamics import Channel, ChannelKind, Trajectory, audit_trajectory, evolve, trajectory
from .errors import InvariantViolation, QCorrError
from .highdim import (
    GeneratorDecomposition,
    Witness,
    WitnessFamily,
    discord_lower_bound_fidelity,
    discord_lower_bound_witness_isotropic,
    discord_lower_bound_witness_werner,
    make_witness,
    negativity,
    witness_expectation,
    witness_local_decomposition,
)
from .linalg import Spectrum, eig_hermitian, partial_trace, partial_transpose
from .oracle import OracleResult, discord_bruteforce, weyl_property_driver
from .states import DensityMatrix, isotropic, load_state, rho1, singlet, werner2, werner_d

__version__ = "0.1.0"
