"""Local quantization of a Klein-Gordon field in a 1D box.

Two complete quantizations of the same field — box modes on [0, R] versus
the union of two independent sub-boxes meeting at r — are linked by an
explicit Bogoliubov dictionary. This package computes that dictionary in
closed form, checks it against quadrature, and exposes the observables
that distinguish the two Fock spaces: local particle content of the global
vacuum, inter-region number correlations, unitary-inequivalence divergence
diagnostics, quasi-local single-particle states, and causality checks for
the evolved local modes.
"""

from .bogoliubov import (
    BogoliubovBlock,
    IdentityResiduals,
    block_digest,
    build_block,
    clear_memo,
    closed_overlap,
    coeff_grid,
    coeff_pair,
    identity_residuals,
)
from .causality import (
    ProbeSpec,
    commutator_pair,
    eval_probe_initial,
    lightcone_leakage,
    make_probe,
    outside_cone_mass,
)
from .config import (
    CacheIOError,
    CavityConfig,
    DimensionError,
    DomainError,
    FrequencyTables,
    GridMismatch,
    ThresholdUnreachable,
    Truncation,
    frequencies,
    load_config_file,
    validate_config,
)
from .fock_oracle import OracleMoments, TruncatedFock, oracle_moments
from .modes import (
    Region,
    SampledMode,
    conjugate_mode,
    eval_global_mode,
    eval_local_initial,
    evolve_local_mode,
    uniform_grid,
)
from .quadrature import InnerProduct, QuadratureSpec, kg_inner, overlap_V
from .quasilocal import (
    OverlapDistribution,
    QuasilocalEnergy,
    WavepacketComparison,
    bandwidth,
    overlap_distribution,
    quasilocal_energy,
    quasilocal_wavepacket,
    steering_shift,
    wavepacket_comparison,
)
from .vacuum import (
    DivergenceScan,
    EnergyResult,
    ModeSumConvergence,
    MomentReport,
    SpectrumResult,
    TrendTable,
    divergence_scan,
    limit_scan,
    local_quantum_energy,
    mode_sum_convergence,
    vacuum_spectrum,
    wick_moments,
)

__version__ = "0.1.0"

__all__ = [
    "BogoliubovBlock",
    "CacheIOError",
    "CavityConfig",
    "DimensionError",
    "DivergenceScan",
    "DomainError",
    "EnergyResult",
    "FrequencyTables",
    "GridMismatch",
    "IdentityResiduals",
    "InnerProduct",
    "ModeSumConvergence",
    "MomentReport",
    "OracleMoments",
    "OverlapDistribution",
    "ProbeSpec",
    "QuadratureSpec",
    "QuasilocalEnergy",
    "Region",
    "SampledMode",
    "SpectrumResult",
    "ThresholdUnreachable",
    "TrendTable",
    "TruncatedFock",
    "Truncation",
    "WavepacketComparison",
    "bandwidth",
    "block_digest",
    "build_block",
    "clear_memo",
    "closed_overlap",
    "coeff_grid",
    "coeff_pair",
    "commutator_pair",
    "conjugate_mode",
    "divergence_scan",
    "eval_global_mode",
    "eval_local_initial",
    "eval_probe_initial",
    "evolve_local_mode",
    "frequencies",
    "identity_residuals",
    "kg_inner",
    "lightcone_leakage",
    "limit_scan",
    "load_config_file",
    "local_quantum_energy",
    "make_probe",
    "mode_sum_convergence",
    "oracle_moments",
    "outside_cone_mass",
    "overlap_V",
    "overlap_distribution",
    "quasilocal_energy",
    "quasilocal_wavepacket",
    "steering_shift",
    "uniform_grid",
    "vacuum_spectrum",
    "validate_config",
    "wavepacket_comparison",
    "wick_moments",
]
