"""Mode evaluation: global stationary modes, local Cauchy data, evolved local modes.

Global modes of the box [0, R] (Dirichlet at both walls):

    U_N(x, t) = sin(pi N x / R) e^{-i Omega_N t} / sqrt(R Omega_N)

Local modes are the Klein-Gordon solutions picked out by sine Cauchy data
confined to one side of the partition at t = 0:

    u_m(x, 0)     = chi_m(x) = theta(r - x) sin(pi m x / r) / sqrt(r omega_m)
    u_m_dot(x, 0) = -i omega_m chi_m(x)

(and mirrored data on [r, R] for the right family). At later times the local
modes delocalize; they are reconstructed from the truncated global series

    u_m(x, t) = sum_N [ alpha_mN e^{-i Omega_N t} + beta_mN e^{+i Omega_N t} ] U_N(x) ,

with U_N(x) = sin(pi N x / R)/sqrt(R Omega_N) and (alpha, beta) the
Bogoliubov rows of ``kgcavity.bogoliubov``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .config import CavityConfig, FrequencyTables, Truncation

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .bogoliubov import BogoliubovBlock

__all__ = [
    "Region",
    "SampledMode",
    "uniform_grid",
    "conjugate_mode",
    "eval_global_mode",
    "eval_local_initial",
    "evolve_local_mode",
]


class Region(enum.Enum):
    """Which sub-interval a local mode family lives on."""

    LEFT = "left"      # [0, r]
    RIGHT = "right"    # [r, R]
    PROBE = "probe"    # [r_tilde, R] with r < r_tilde < R (see kgcavity.causality)


@dataclass
class SampledMode:
    """A complex mode and its time derivative sampled on a spatial grid at one time.

    The (value, tderiv) pair is the Cauchy data of the solution at ``time``.
    ``tail_estimate`` / ``truncation_warning`` are populated by the series
    evaluator when the neglected global-mode tail is estimated to matter;
    ``gibbs_overshoot`` reports the truncated series' overshoot near the
    support edge at t = 0 (reported, never thresholded).
    """

    grid: np.ndarray
    value: np.ndarray
    tderiv: np.ndarray
    time: float
    tail_estimate: float = 0.0
    truncation_warning: bool = False
    gibbs_overshoot: float | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if len(self.value) != len(self.grid) or len(self.tderiv) != len(self.grid):
            raise ValueError(
                "value/tderiv must match the grid length: "
                f"{len(self.grid)} vs {len(self.value)}/{len(self.tderiv)}"
            )


def uniform_grid(cfg: CavityConfig, n_points: int) -> np.ndarray:
    """Uniform grid on [0, R] including both endpoints."""
    return np.linspace(0.0, cfg.R, n_points)


def conjugate_mode(mode: SampledMode) -> SampledMode:
    """The conjugate solution u*: Cauchy data (u*, (u_dot)*) at the same time."""
    return SampledMode(
        grid=mode.grid,
        value=np.conj(mode.value),
        tderiv=np.conj(mode.tderiv),
        time=mode.time,
    )


# ── evaluation ──────────────────────────────────────────────────────────────

def eval_global_mode(
    N: int,
    grid: np.ndarray,
    t: float,
    cfg: CavityConfig,
    tables: FrequencyTables,
) -> SampledMode:
    """U_N sampled on ``grid`` at time ``t``; endpoints exactly zero."""
    if not 1 <= N <= len(tables.Omega):
        raise IndexError(f"global index N={N} outside table of length {len(tables.Omega)}")
    grid = np.asarray(grid, dtype=np.float64)
    Om = tables.Omega[N - 1]
    s = np.sin(np.pi * N * grid / cfg.R) / np.sqrt(cfg.R * Om)
    # sin(pi N) in floats is ~1e-16, not 0; Dirichlet walls are exact by construction
    s[grid <= 0.0] = 0.0
    s[grid >= cfg.R] = 0.0
    value = s * np.exp(-1j * Om * t)
    return SampledMode(grid=grid, value=value, tderiv=-1j * Om * value, time=float(t))


def eval_local_initial(
    region: Region,
    m: int,
    grid: np.ndarray,
    cfg: CavityConfig,
    tables: FrequencyTables,
) -> SampledMode:
    """Local-mode Cauchy data at t = 0: value = chi_m, tderiv = -i omega_m chi_m.

    Zero outside the open region, including at the partition point x = r
    itself (measure-zero convention; the series does not converge there).
    """
    grid = np.asarray(grid, dtype=np.float64)
    if region is Region.LEFT:
        width, offset, freq_table = cfg.r, 0.0, tables.omega
        support = (grid > 0.0) & (grid < cfg.r)
    elif region is Region.RIGHT:
        width, offset, freq_table = cfg.r_bar, cfg.r, tables.omega_bar
        support = (grid > cfg.r) & (grid < cfg.R)
    else:
        raise ValueError("eval_local_initial takes Region.LEFT or Region.RIGHT")
    if not 1 <= m <= len(freq_table):
        raise IndexError(f"local index m={m} outside table of length {len(freq_table)}")
    om = freq_table[m - 1]
    value = np.where(
        support,
        np.sin(np.pi * m * (grid - offset) / width) / np.sqrt(width * om),
        0.0,
    ).astype(np.complex128)
    return SampledMode(grid=grid, value=value, tderiv=-1j * om * value, time=0.0)


def evolve_local_mode(
    region: Region,
    m: int,
    grid: np.ndarray,
    t: float,
    cfg: CavityConfig,
    tables: FrequencyTables,
    trunc: Truncation,
    block: "BogoliubovBlock",
    tail_tol: float = 1e-6,
    chunk: int = 256,
) -> SampledMode:
    """Local mode u_m at time t from the truncated global series.

    value(x) = sum_N (alpha_mN e^{-i Omega_N t} + beta_mN e^{+i Omega_N t}) U_N(x),
    tderiv the termwise time derivative. The N-sum runs in fixed ascending
    order with numpy's pairwise reduction along the contiguous axis, so the
    result is bit-identical for any ``chunk`` (the grid is split, never the
    N-sum within one point).
    """
    if block.region is not region:
        raise ValueError(f"block was built for {block.region}, asked to evolve {region}")
    if block.alpha.shape[1] != trunc.n_max_global:
        raise ValueError(
            f"block holds {block.alpha.shape[1]} global terms, truncation wants "
            f"{trunc.n_max_global}"
        )
    if not 1 <= m <= block.alpha.shape[0]:
        raise IndexError(f"local index m={m} outside block with {block.alpha.shape[0]} rows")

    grid = np.asarray(grid, dtype=np.float64)
    Om = tables.Omega[: trunc.n_max_global]
    a_row = block.alpha[m - 1]
    b_row = block.beta[m - 1]

    phase_neg = np.exp(-1j * Om * t)
    norm = 1.0 / np.sqrt(cfg.R * Om)
    cv = (a_row * phase_neg + b_row * np.conj(phase_neg)) * norm
    cd = (-1j * Om) * (a_row * phase_neg - b_row * np.conj(phase_neg)) * norm

    n_idx = np.arange(1, trunc.n_max_global + 1, dtype=np.float64)
    value = np.empty(len(grid), dtype=np.complex128)
    tderiv = np.empty(len(grid), dtype=np.complex128)
    interior = (grid > 0.0) & (grid < cfg.R)
    for lo in range(0, len(grid), chunk):
        hi = min(lo + chunk, len(grid))
        # (points, N) layout keeps the N-reduction on the contiguous axis
        sines = np.sin(np.outer(grid[lo:hi], n_idx) * (np.pi / cfg.R))
        value[lo:hi] = np.sum(sines * cv, axis=1)
        tderiv[lo:hi] = np.sum(sines * cd, axis=1)
    value[~interior] = 0.0
    tderiv[~interior] = 0.0

    # Tail envelope: |term| <= (|alpha|+|beta|)/sqrt(R Omega) ~ c/N^2; the
    # neglected sum is then ~ c/n_max by the integral test.
    t_env = (np.abs(a_row[-50:]) + np.abs(b_row[-50:])) * norm[-50:]
    c_env = float(np.max(t_env * n_idx[-50:] ** 2))
    tail_estimate = c_env / trunc.n_max_global

    gibbs = None
    if t == 0.0:
        om = (tables.omega if region is Region.LEFT else tables.omega_bar)[m - 1]
        width = cfg.r if region is Region.LEFT else cfg.r_bar
        exact_sup = 1.0 / np.sqrt(width * om)
        gibbs = float(np.max(np.abs(value)) / exact_sup - 1.0)

    return SampledMode(
        grid=grid,
        value=value,
        tderiv=tderiv,
        time=float(t),
        tail_estimate=tail_estimate,
        truncation_warning=bool(tail_estimate > tail_tol),
        gibbs_overshoot=gibbs,
    )
