"""Lie-Trotter lattice dynamics and persistent random walk Monte Carlo in 1+1D.

Components are ordered ``(p_plus, p_minus)``: ``p_plus`` moves right at speed
``c`` and ``p_minus`` moves left; the internal state flips at rate ``lambda``.
With ``lambda = c = 1`` the master equation is the massive Dirac equation with
``e_0 = sigma_1``, ``e_1 = sigma_3`` and ``alpha = 1``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import philox
from .clifford_reps import canonical_1d
from .propagator import EvolutionParams
from .spectral_solver import DensityField, GridSpec, evolve


class ConfigError(ValueError):
    pass


@dataclass
class LatticeField:
    values: np.ndarray  # shape (2, n)
    dx: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != 2:
            raise ValueError(f"lattice field needs shape (2, n), got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("lattice field has non-finite entries")

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def mass(self) -> float:
        return self.dx * math.fsum(self.values.ravel())

    @classmethod
    def from_density(cls, f: DensityField) -> "LatticeField":
        if f.grid.d != 1 or f.S != 2:
            raise ValueError("need a two-component field on a 1-d grid")
        return cls(f.values.copy(), f.grid.dx)

    def to_density(self, grid: GridSpec) -> DensityField:
        return DensityField(grid, self.values.copy())


def mixing_matrix(tau: float) -> np.ndarray:
    """``exp(tau (sigma_1 - I))``: a symmetric doubly stochastic 2x2 matrix."""
    r = math.exp(-2.0 * tau)
    return 0.5 * np.array([[1.0 + r, 1.0 - r], [1.0 - r, 1.0 + r]])


def _mix(v: np.ndarray, tau: float) -> np.ndarray:
    # V as a transfer m = b (p_plus - p_minus): both outputs stay >= 0 in floating
    # point (b <= 1/2) and the rounding of the site sums is unbiased.
    b = 0.5 * (1.0 - math.exp(-2.0 * tau))
    m = b * (v[0] - v[1])
    return np.stack([v[0] - m, v[1] + m])


def mix_step(f: LatticeField, tau: float) -> LatticeField:
    """Apply ``V(tau) = exp(tau (sigma_1 - I))`` at every site."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return LatticeField(_mix(f.values, tau), f.dx)


def shift_step(f: LatticeField, steps: int) -> LatticeField:
    """Move ``p_plus`` right and ``p_minus`` left by ``steps`` sites (periodic)."""
    v = np.empty_like(f.values)
    v[0] = np.roll(f.values[0], steps)
    v[1] = np.roll(f.values[1], -steps)
    return LatticeField(v, f.dx)


def trotter_evolve(p0: LatticeField, t: float, N: int) -> LatticeField:
    """``(V(t/N) T(t/N))^N p0`` with one lattice site of transport per substep."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    tau = t / N
    if abs(tau - p0.dx) > 1e-12:
        raise ValueError(f"t/N = {tau!r} must equal the lattice spacing {p0.dx!r}")
    v = p0.values.copy()
    for _ in range(N):
        v[0] = np.roll(v[0], 1)
        v[1] = np.roll(v[1], -1)
        v = _mix(v, tau)
    return LatticeField(v, p0.dx)


def gauge_transform(values, lam: float, t: float, direction: str):
    """``psi = exp(lam t) p`` (``to_psi``) or its inverse (``to_p``)."""
    if direction == "to_psi":
        return np.asarray(values) * math.exp(lam * t)
    if direction == "to_p":
        return np.asarray(values) * math.exp(-lam * t)
    raise ValueError(f"direction must be 'to_psi' or 'to_p', got {direction!r}")


def per_solution(p0: DensityField, lam: float, c: float, t: float) -> DensityField:
    """Spectral solution of ``dp/dt = lam (sigma_1 - I) p - c sigma_3 dp/dx``.

    Rescaling time by ``lam`` and space by ``lam / c`` maps the equation onto
    the unit-rate Dirac form, evaluated on the correspondingly rescaled grid.
    """
    if not (lam > 0 and c > 0):
        raise ValueError("lam and c must be positive")
    g = p0.grid
    scaled = GridSpec(g.d, g.n, g.L * lam / c)
    params = EvolutionParams(1.0, canonical_1d(1))
    # same sample values: a density in scaled coordinates differs by a constant factor
    out = evolve(params, DensityField(scaled, p0.values), lam * t)
    return DensityField(g, out.values)


@dataclass(frozen=True)
class PRWConfig:
    lam: float
    c: float
    n_walkers: int
    seed: int
    dt: float
    initial_position: float = 0.0
    initial_state: int = 1

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError(f"lambda must be nonnegative, got {self.lam}")
        if not (self.c > 0 and self.dt > 0):
            raise ConfigError("c and dt must be positive")
        if not self.lam * self.dt < 1:
            raise ConfigError(f"lambda*dt = {self.lam * self.dt} must be < 1")
        if int(self.n_walkers) != self.n_walkers or self.n_walkers < 1:
            raise ConfigError(f"n_walkers must be a positive integer, got {self.n_walkers}")
        if self.initial_state not in (1, -1):
            raise ConfigError("initial_state must be +1 or -1")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in 64 bits")


@dataclass
class WalkerEnsemble:
    positions: np.ndarray
    states: np.ndarray
    t: float

    def histogram(self, grid: GridSpec) -> DensityField:
        """Per-(state, bin) probability mass over density units; bins centred on sites."""
        if grid.d != 1:
            raise ValueError("histogram needs a 1-d grid")
        idx = np.floor((self.positions + grid.L) / grid.dx + 0.5).astype(np.int64) % grid.n
        comp = (self.states < 0).astype(np.int64)
        counts = np.bincount(comp * grid.n + idx, minlength=2 * grid.n).reshape(2, grid.n)
        return DensityField(grid, counts / (len(self.positions) * grid.dx))


def n_steps(t: float, dt: float) -> int:
    return int(math.ceil(t / dt - 1e-9))


def prw_simulate(cfg: PRWConfig, t: float) -> WalkerEnsemble:
    """Each step: flip with probability ``lam dt``, then move ``state * c * dt``.

    Walker ``w`` draws from its own Philox counter stream keyed by ``cfg.seed``,
    so results do not depend on how walkers are batched.
    """
    if not t > 0:
        raise ConfigError(f"t must be positive, got {t}")
    n = int(cfg.n_walkers)
    steps = n_steps(t, cfg.dt)
    p_flip = cfg.lam * cfg.dt
    walkers = np.arange(n, dtype=np.uint64)
    state = np.full(n, cfg.initial_state, dtype=np.int64)
    disp = np.zeros(n, dtype=np.int64)
    u = None
    for s in range(steps):
        if s % 4 == 0:
            u = philox.uniforms(cfg.seed, walkers, s // 4)
        flip = u[s % 4] < p_flip
        state = np.where(flip, -state, state)
        disp += state
    positions = cfg.initial_position + cfg.c * cfg.dt * disp
    return WalkerEnsemble(positions=positions, states=state, t=steps * cfg.dt)


def prw_step_law(f: LatticeField, lam: float, dt: float) -> LatticeField:
    """Exact one-step law of the walk on a lattice with spacing ``c * dt``."""
    P = np.array([[1 - lam * dt, lam * dt], [lam * dt, 1 - lam * dt]])
    return shift_step(LatticeField(P @ f.values, f.dx), 1)


def write_ensemble_csv(ens: WalkerEnsemble, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["state", "position"])
        for s, x in zip(ens.states, ens.positions):
            w.writerow([int(s), f"{x:.17g}"])


def write_histogram_csv(hist: DensityField, path) -> None:
    centers = hist.grid.axis()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["state", "bin_center", "mass"])
        for comp, state in ((0, 1), (1, -1)):
            for xc, v in zip(centers, hist.values[comp]):
                w.writerow([state, f"{xc:.17g}", f"{v * hist.grid.dx:.17g}"])


def per_bin_masses(grid: GridSpec, lam: float, c: float, t: float,
                   state: int = 1, refine: int = 16) -> np.ndarray:
    """Probability per ``(state, bin)`` for a walker started at the origin.

    The master equation is solved on a grid ``refine`` times finer and its mass
    summed over each bin of ``grid``; point samples of a solution with moving
    jumps are not bin masses.
    """
    if grid.d != 1:
        raise ValueError("need a 1-d grid")
    if refine < 1 or refine & (refine - 1):
        raise ValueError("refine must be a power of two")
    fine = GridSpec(1, grid.n * refine, grid.L)
    d0 = np.zeros((2, fine.n))
    d0[0 if state > 0 else 1, fine.n // 2] = 1.0 / fine.dx
    p = per_solution(DensityField(fine, d0), lam, c, t).values * fine.dx
    # fine site refine*j is coarse site j; its bin spans refine/2 sites either side
    p = np.roll(p, refine // 2, axis=1)
    return p.reshape(2, grid.n, refine).sum(axis=-1)


def l1_distance(ens: WalkerEnsemble, grid: GridSpec, lam: float, c: float,
                state: int = 1, refine: int = 16) -> float:
    """L1 distance between walker bin masses and the master-equation bin masses."""
    emp = ens.histogram(grid).values * grid.dx
    ref = per_bin_masses(grid, lam, c, ens.t, state=state, refine=refine)
    return float(np.abs(emp - ref).sum())
