"""Global-vacuum observables seen through the local number operators.

The global vacuum |0_G> is not the local vacuum: each local annihilator
a_m = sum_N p_N A_N + q_N A_N^dagger (rows p = alpha_m, q from beta_m)
mixes creators in, so local number expectations, inter-region covariances
and the unitary-inequivalence diagnostics are all plain coefficient sums:

    <n_m>        = sum_N beta_mN^2
    var(n_m)     = (sum p^2)(sum q^2) + (sum p q)^2          (Wick)
    cov(n_m,n_n) = (sum q p')(sum p q') + (sum q q')(sum p p')

with primes the other region's rows. Every sum here is a fixed-order
numpy pairwise reduction; tail bounds use the integral test with sin^2
replaced by its mean 1/2, and are reported, never silently applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .bogoliubov import BogoliubovBlock, coeff_grid
from .config import CavityConfig, FrequencyTables, Truncation, validate_config
from .modes import Region

__all__ = [
    "SpectrumResult",
    "DivergenceScan",
    "ModeSumConvergence",
    "EnergyResult",
    "MomentReport",
    "TrendTable",
    "vacuum_spectrum",
    "divergence_scan",
    "mode_sum_convergence",
    "local_quantum_energy",
    "wick_moments",
    "limit_scan",
]


# ── result types ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SpectrumResult:
    """<0_G| n_l |0_G> per local mode l, with per-l tail estimates."""

    region: Region
    values: np.ndarray
    tail_bound: np.ndarray
    truncation: Truncation


@dataclass(frozen=True)
class DivergenceScan:
    """Partial sums S(M) = sum_{m<=M} (beta_mN^2 + beta_bar_mN^2) at fixed N.

    A log-divergent S(M) (b > 0 with a good a + b log M fit) certifies that
    the two quantizations cannot be unitarily connected.
    """

    N: int
    M_list: np.ndarray
    partial_sums: np.ndarray
    fit_slope: float
    fit_intercept: float
    fit_r2: float


@dataclass(frozen=True)
class ModeSumConvergence:
    """The opposite (convergent) direction: N-sums at fixed local index m."""

    region: Region
    m: int
    n_list: np.ndarray
    alpha2_partial: np.ndarray
    beta2_partial: np.ndarray
    alpha2_tail: float
    beta2_tail: float


@dataclass(frozen=True)
class EnergyResult:
    """Average energy of one local quantum over the global Hamiltonian."""

    epsilon: float
    tail_bound: float

    def n_particle_energy(self, n: int) -> float:
        """Energy of the n-quanta state built on this mode: n * epsilon."""
        return n * self.epsilon


@dataclass(frozen=True)
class MomentReport:
    """Wick-computed number-operator moments across the partition."""

    m_range: tuple
    n_range: tuple
    mean_left: np.ndarray
    mean_right: np.ndarray
    var_left: np.ndarray
    var_right: np.ndarray
    cov: np.ndarray
    corr: np.ndarray
    corr_paper_norm: np.ndarray | None = None
    double_sum_max_rel_diff: float | None = None


@dataclass(frozen=True)
class TrendTable:
    """Per-probe trends along a mass or partition-size scan."""

    kind: str
    values: np.ndarray
    probe_indices: tuple
    M_fixed: int
    n_per_probe: np.ndarray      # <n_m> per (scan value, probe)
    alpha_mag: np.ndarray        # |alpha_mN| per (scan value, probe)
    beta_mag: np.ndarray         # |beta_mN| per (scan value, probe)
    sum_left: np.ndarray         # sum_{m<=M} <n_m>
    sum_both: np.ndarray         # sum_{m<=M} (<n_m> + <n_bar_m>)


# ── helpers ─────────────────────────────────────────────────────────────────

def _region_width_freq(region: Region, cfg: CavityConfig) -> float:
    return cfg.r if region is Region.LEFT else cfg.r_bar


def _omega_of(region: Region, tables: FrequencyTables) -> np.ndarray:
    return tables.omega if region is Region.LEFT else tables.omega_bar


def _tail_quad(f, start: float) -> float:
    """quad of f over [start, inf) via N = start/x, which maps the tail onto
    (0, 1] and keeps the quadrature away from the slow-decay regime."""
    val, _ = integrate.quad(lambda x: f(start / x) * start / (x * x), 0.0, 1.0)
    return float(val)


def _spectrum_tail(region: Region, l: int, cfg: CavityConfig, om_l: float, n_from: int) -> float:
    """Integral-test tail of sum_N beta_lN^2 beyond N = n_from, sin^2 -> 1/2."""
    w = _region_width_freq(region, cfg)
    pref = l**2 * np.pi**2 / (2.0 * cfg.R * w**3 * om_l)

    def integrand(N: float) -> float:
        Om = math.sqrt((math.pi * N / cfg.R) ** 2 + cfg.mu**2)
        return pref / (Om * (Om + om_l) ** 2)

    return _tail_quad(integrand, float(n_from))


# ── operations ──────────────────────────────────────────────────────────────

def vacuum_spectrum(
    region: Region,
    cfg: CavityConfig,
    tables: FrequencyTables,
    trunc: Truncation,
) -> SpectrumResult:
    """<n_l> = sum_N beta_lN^2 for l = 1..m_max_local, plus tail estimates.

    Row-chunked so that large n_max_global never materializes a full block.
    """
    m_max = trunc.m_max_local
    n_idx = np.arange(1, trunc.n_max_global + 1)
    values = np.empty(m_max)
    step = max(1, 4_194_304 // trunc.n_max_global)
    for lo in range(0, m_max, step):
        m_idx = np.arange(lo + 1, min(lo + step, m_max) + 1)
        _, beta = coeff_grid(region, m_idx, n_idx, cfg, trunc.resonance_eps)
        values[lo : lo + len(m_idx)] = np.sum(beta * beta, axis=1)
    om = _omega_of(region, tables)[:m_max]
    tails = np.array(
        [_spectrum_tail(region, l, cfg, om[l - 1], trunc.n_max_global) for l in range(1, m_max + 1)]
    )
    return SpectrumResult(region=region, values=values, tail_bound=tails, truncation=trunc)


def divergence_scan(
    N: int,
    cfg: CavityConfig,
    tables: FrequencyTables,
    M_list,
    resonance_eps: float = 1e-8,
) -> DivergenceScan:
    """Partial sums over m <= M of |beta_mN|^2 + |beta_bar_mN|^2, fixed N,
    fitted against a + b log M.

    The summand falls off like 1/m for large m, so S(M) grows
    logarithmically whenever sin(N pi r / R) != 0 — the numerical face of
    the inequivalence argument.
    """
    M_arr = np.asarray(sorted(int(M) for M in M_list))
    if M_arr[0] < 1:
        raise ValueError("M values must be >= 1")
    m_idx = np.arange(1, M_arr[-1] + 1)
    N_idx = np.array([N])
    _, beta_left = coeff_grid(Region.LEFT, m_idx, N_idx, cfg, resonance_eps)
    _, beta_right = coeff_grid(Region.RIGHT, m_idx, N_idx, cfg, resonance_eps)
    summand = beta_left[:, 0] ** 2 + beta_right[:, 0] ** 2
    running = np.cumsum(summand)
    partial = running[M_arr - 1]

    logM = np.log(M_arr.astype(np.float64))
    slope, intercept = np.polyfit(logM, partial, 1)
    fitted = slope * logM + intercept
    ss_res = float(np.sum((partial - fitted) ** 2))
    ss_tot = float(np.sum((partial - partial.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DivergenceScan(
        N=N,
        M_list=M_arr,
        partial_sums=partial,
        fit_slope=float(slope),
        fit_intercept=float(intercept),
        fit_r2=r2,
    )


def mode_sum_convergence(
    region: Region,
    m: int,
    cfg: CavityConfig,
    tables: FrequencyTables,
    n_list,
    resonance_eps: float = 1e-8,
) -> ModeSumConvergence:
    """Fixed local index m, growing global cutoff: sum_N alpha^2 and
    sum_N beta^2 both converge (the asymmetry opposite the m-scan)."""
    n_arr = np.asarray(sorted(int(n) for n in n_list))
    N_idx = np.arange(1, n_arr[-1] + 1)
    alpha, beta = coeff_grid(region, np.array([m]), N_idx, cfg, resonance_eps)
    a2 = np.cumsum(alpha[0] ** 2)[n_arr - 1]
    b2 = np.cumsum(beta[0] ** 2)[n_arr - 1]

    w = _region_width_freq(region, cfg)
    om_m = math.sqrt((math.pi * m / w) ** 2 + cfg.mu**2)
    pref = m**2 * np.pi**2 / (2.0 * cfg.R * w**3 * om_m)

    def a_tail(N: float) -> float:
        Om = math.sqrt((math.pi * N / cfg.R) ** 2 + cfg.mu**2)
        return pref / (Om * (Om - om_m) ** 2)

    start = max(float(n_arr[-1]), 2.0 * om_m * cfg.R / np.pi)  # past the resonance pole
    alpha2_tail = _tail_quad(a_tail, start)
    beta2_tail = _spectrum_tail(region, m, cfg, om_m, int(n_arr[-1]))
    return ModeSumConvergence(
        region=region,
        m=m,
        n_list=n_arr,
        alpha2_partial=a2,
        beta2_partial=b2,
        alpha2_tail=float(alpha2_tail),
        beta2_tail=beta2_tail,
    )


def local_quantum_energy(
    region: Region,
    l: int,
    cfg: CavityConfig,
    tables: FrequencyTables,
    trunc: Truncation,
) -> EnergyResult:
    """epsilon_l = sum_N Omega_N (alpha_lN^2 + beta_lN^2): the average global
    energy carried by one local quantum. Positive term by term; finite
    because the summand falls off like sin^2(x)/x^2."""
    N_idx = np.arange(1, trunc.n_max_global + 1)
    alpha, beta = coeff_grid(region, np.array([l]), N_idx, cfg, trunc.resonance_eps)
    Om = tables.Omega[: trunc.n_max_global]
    eps_l = float(np.sum(Om * (alpha[0] ** 2 + beta[0] ** 2)))

    w = _region_width_freq(region, cfg)
    om_l = math.sqrt((math.pi * l / w) ** 2 + cfg.mu**2)
    pref = l**2 * np.pi**2 / (2.0 * cfg.R * w**3 * om_l)

    def integrand(N: float) -> float:
        Om_c = (math.pi * N / cfg.R) ** 2 + cfg.mu**2
        return pref * 2.0 * (Om_c + om_l**2) / (Om_c - om_l**2) ** 2

    # keep the integral test on the monotone side of the resonance pole
    start = max(float(trunc.n_max_global), 2.0 * om_l * cfg.R / np.pi)
    tail = _tail_quad(integrand, start)
    return EnergyResult(epsilon=eps_l, tail_bound=tail)


def _double_sum_cov(qp: np.ndarray, pq: np.ndarray, qq: np.ndarray, pp: np.ndarray) -> float:
    """cov via the explicit (N, P) double sum (verification route).

    Evaluates sum_{N,P} [ qp[N] pq[P] + qq[N] pp[P] ] term by term in fixed
    chunks; O(n_max^2) work, kept only as a cross-check of the factored form.
    """
    chunk = 1024
    n = len(qp)
    partials = []
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        block = qp[:, None] * pq[None, lo:hi] + qq[:, None] * pp[None, lo:hi]
        partials.append(float(np.sum(block)))
    return math.fsum(partials)


def wick_moments(
    m_range,
    n_range,
    left_block: BogoliubovBlock,
    right_block: BogoliubovBlock,
    verify_double_sum: bool = False,
    paper_norm: bool = False,
) -> MomentReport:
    """Means, variances, covariances and correlations of (n_m, n_bar_n).

    cov factors into products of single sums (Wick), reducing O(N^2) to
    O(N); ``verify_double_sum`` re-evaluates each cov entry as the explicit
    (N, P) double sum and reports the worst relative disagreement.
    ``paper_norm`` adds a second correlation matrix whose denominator is the
    *summed* spectrum over all block rows on each side (a normalization some
    presentations use; it grows with the local cutoff, so it is not the
    statistical correlation coefficient — both are reported).
    """
    if left_block.alpha.shape[1] != right_block.alpha.shape[1]:
        raise ValueError("left/right blocks disagree on the global cutoff")
    m_range = tuple(int(m) for m in m_range)
    n_range = tuple(int(n) for n in n_range)
    for m in m_range:
        if not 1 <= m <= left_block.alpha.shape[0]:
            raise IndexError(f"m={m} outside the left block")
    for n in n_range:
        if not 1 <= n <= right_block.alpha.shape[0]:
            raise IndexError(f"n={n} outside the right block")

    def side_stats(block: BogoliubovBlock, rows) -> tuple[np.ndarray, np.ndarray]:
        means = np.empty(len(rows))
        variances = np.empty(len(rows))
        for i, m in enumerate(rows):
            p, q = block.alpha[m - 1], block.beta[m - 1]
            A = np.sum(p * p)
            B = np.sum(q * q)
            C = np.sum(p * q)
            means[i] = B
            variances[i] = A * B + C * C
        return means, variances

    mean_left, var_left = side_stats(left_block, m_range)
    mean_right, var_right = side_stats(right_block, n_range)

    cov = np.empty((len(m_range), len(n_range)))
    worst_rel = 0.0
    for i, m in enumerate(m_range):
        p, q = left_block.alpha[m - 1], left_block.beta[m - 1]
        for j, n in enumerate(n_range):
            pb, qb = right_block.alpha[n - 1], right_block.beta[n - 1]
            qp = q * pb
            pq = p * qb
            qq = q * qb
            pp = p * pb
            cov[i, j] = np.sum(qp) * np.sum(pq) + np.sum(qq) * np.sum(pp)
            if verify_double_sum:
                ds = _double_sum_cov(qp, pq, qq, pp)
                scale = max(abs(cov[i, j]), abs(ds), 1e-300)
                worst_rel = max(worst_rel, abs(cov[i, j] - ds) / scale)

    # A vanishing variance forces a vanishing covariance (Cauchy-Schwarz),
    # so the 0/0 rows of a beta-free block are genuinely uncorrelated.
    denom = np.sqrt(np.outer(var_left, var_right))
    corr = np.where(denom > 0.0, cov / np.where(denom > 0.0, denom, 1.0), 0.0)
    if np.any(np.abs(corr) > 1.0 + 1e-9):
        raise AssertionError("correlation coefficient left (-1, 1) beyond numerical slack")

    corr_paper = None
    if paper_norm:
        total_left = float(np.sum(np.sum(left_block.beta**2, axis=1)))
        total_right = float(np.sum(np.sum(right_block.beta**2, axis=1)))
        corr_paper = cov / math.sqrt(total_left * total_right)

    return MomentReport(
        m_range=m_range,
        n_range=n_range,
        mean_left=mean_left,
        mean_right=mean_right,
        var_left=var_left,
        var_right=var_right,
        cov=cov,
        corr=corr,
        corr_paper_norm=corr_paper,
        double_sum_max_rel_diff=worst_rel if verify_double_sum else None,
    )


def limit_scan(
    kind: str,
    values,
    probe_indices,
    cfg: CavityConfig,
    trunc: Truncation,
    M_fixed: int = 100,
) -> TrendTable:
    """Trends of <n_m>, |alpha_mN|, |beta_mN| and sum_{m<=M} <n_m> along a scan.

    kind = "mass": values are mu*R, partition fixed at cfg.r.
    kind = "partition-size": values are r/R, mass fixed at cfg.mu.

    The per-mode and summed columns move in opposite directions near r -> R:
    each <n_m> dies while the M-sum hangs on — the scan makes the
    non-commuting pair of limits visible.
    """
    if kind not in ("mass", "partition-size"):
        raise ValueError(f"unknown scan kind {kind!r}")
    values = np.asarray(list(values), dtype=np.float64)
    probes = tuple((int(m), int(N)) for m, N in probe_indices)
    n_idx = np.arange(1, trunc.n_max_global + 1)

    n_per = np.empty((len(values), len(probes)))
    a_mag = np.empty_like(n_per)
    b_mag = np.empty_like(n_per)
    s_left = np.empty(len(values))
    s_both = np.empty(len(values))

    for k, v in enumerate(values):
        if kind == "mass":
            cfg_k = validate_config(cfg.R, cfg.r, v / cfg.R)
        else:
            cfg_k = validate_config(cfg.R, v * cfg.R, cfg.mu)
        m_sum = np.arange(1, M_fixed + 1)
        _, bl = coeff_grid(Region.LEFT, m_sum, n_idx, cfg_k, trunc.resonance_eps)
        _, br = coeff_grid(Region.RIGHT, m_sum, n_idx, cfg_k, trunc.resonance_eps)
        left_modes = np.sum(bl * bl, axis=1)
        s_left[k] = float(np.sum(left_modes))
        s_both[k] = s_left[k] + float(np.sum(np.sum(br * br, axis=1)))
        for ip, (m, N) in enumerate(probes):
            if m <= M_fixed:
                n_per[k, ip] = left_modes[m - 1]
            else:
                _, brow = coeff_grid(Region.LEFT, np.array([m]), n_idx, cfg_k, trunc.resonance_eps)
                n_per[k, ip] = float(np.sum(brow[0] ** 2))
            a, b = coeff_grid(Region.LEFT, np.array([m]), np.array([N]), cfg_k, trunc.resonance_eps)
            a_mag[k, ip] = abs(float(a[0, 0]))
            b_mag[k, ip] = abs(float(b[0, 0]))

    return TrendTable(
        kind=kind,
        values=values,
        probe_indices=probes,
        M_fixed=M_fixed,
        n_per_probe=n_per,
        alpha_mag=a_mag,
        beta_mag=b_mag,
        sum_left=s_left,
        sum_both=s_both,
    )
