"""Periodic spectral evolution of S-component densities on a regular grid.

The torus ``[-L, L)^d`` stands in for ``R^d``. The transform convention is
``Phi[u](k) = int u(x) exp(+i k.x) dx`` with wave numbers ``k_j = pi j / L``.
Evolution to time ``t`` is closed form per mode, so the only error is spatial.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .propagator import EvolutionParams, apply_propagator

# evolve() refuses results whose discarded imaginary part exceeds this
IMAG_RESIDUE_LIMIT = 1e-8


class ShapeMismatchError(ValueError):
    pass


class PropagatorBugError(RuntimeError):
    """The evolved field has a significant imaginary part."""


@dataclass(frozen=True)
class GridSpec:
    d: int
    n: int
    L: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    def axis(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.n)

    def wave_numbers(self) -> np.ndarray:
        """Per-axis wave numbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    def coordinates(self) -> list:
        """``d`` arrays of shape ``grid.shape`` with the site coordinates."""
        return np.meshgrid(*([self.axis()] * self.d), indexing="ij")

    def kgrid(self) -> np.ndarray:
        """Wave vectors of all modes, shape ``(d, n**d)``."""
        ks = np.meshgrid(*([self.wave_numbers()] * self.d), indexing="ij")
        return np.stack([k.ravel() for k in ks])


@dataclass
class DensityField:
    grid: GridSpec
    values: np.ndarray  # shape (S,) + grid.shape

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[1:] != self.grid.shape:
            raise ShapeMismatchError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("density field has non-finite entries")

    @property
    def S(self) -> int:
        return self.values.shape[0]

    def mass(self) -> float:
        return float(self.values.sum() * self.grid.dx**self.grid.d)

    def min_entry(self):
        """Minimum value and its ``(component, site)`` location."""
        flat = int(np.argmin(self.values))
        idx = np.unravel_index(flat, self.values.shape)
        return float(self.values[idx]), (int(idx[0]), tuple(int(i) for i in idx[1:]))

    def transform(self) -> np.ndarray:
        """``Phi[p]`` at the grid wave numbers (FFT order), by the rectangle rule."""
        axes = tuple(range(1, self.grid.d + 1))
        n, d, L = self.grid.n, self.grid.d, self.grid.L
        raw = np.fft.ifftn(self.values, axes=axes) * n**d
        phase = np.exp(-1j * self.grid.kgrid().sum(axis=0) * L).reshape(self.grid.shape)
        return raw * phase * self.grid.dx**d


@dataclass
class PositivityReport:
    times: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    min_entry: list = field(default_factory=list)
    location: list = field(default_factory=list)

    def worst(self):
        """Index of the sample with the most negative entry, or ``None``."""
        if not self.times:
            return None
        return int(np.argmin(self.min_entry))


def _nyquist_symmetric_apply(params, grid, t, modes):
    kgrid = grid.kgrid()
    out = apply_propagator(params, kgrid, t, modes)
    # A Nyquist mode is its own partner; averaging D over k_nyq -> -k_nyq keeps
    # the evolved field real.
    nyq = -np.pi / grid.dx
    on_nyq = np.isclose(kgrid, nyq, rtol=0, atol=1e-12 / grid.dx)
    rows = np.flatnonzero(on_nyq.any(axis=0))
    if rows.size:
        ksub, msub = kgrid[:, rows], modes[:, rows]
        acc = np.zeros_like(msub)
        signs = list(itertools.product((1.0, -1.0), repeat=grid.d))
        for s in signs:
            flip = np.where(on_nyq[:, rows], np.asarray(s)[:, None], 1.0)
            acc += apply_propagator(params, ksub * flip, t, msub)
        out[:, rows] = acc / len(signs)
    return out


def evolve(params: EvolutionParams, p0: DensityField, t: float) -> DensityField:
    """Exact-in-time evolution of ``p0`` on its grid."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    grid = p0.grid
    if params.g.d != grid.d:
        raise ShapeMismatchError(f"generators have d={params.g.d}, grid has d={grid.d}")
    if params.g.S != p0.S:
        raise ShapeMismatchError(f"generators have S={params.g.S}, field has S={p0.S}")
    axes = tuple(range(1, grid.d + 1))
    S = p0.S
    modes = np.fft.ifftn(p0.values, axes=axes).reshape(S, -1)
    modes = _nyquist_symmetric_apply(params, grid, t, modes)
    out = np.fft.fftn(modes.reshape((S,) + grid.shape), axes=axes)
    residue = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if residue > IMAG_RESIDUE_LIMIT:
        raise PropagatorBugError(f"imaginary residue {residue:.3e} after evolution")
    return DensityField(grid, out.real)


def cauchy_density(grid: GridSpec, a=None) -> np.ndarray:
    """Product Cauchy density ``pi^-d prod (1 + (x_mu - a_mu)^2)^-1`` on the grid."""
    a = np.zeros(grid.d) if a is None else np.asarray(a, dtype=float).reshape(grid.d)
    f = np.ones(grid.shape)
    for mu, x in enumerate(grid.coordinates()):
        f = f / (np.pi * (1.0 + (x - a[mu]) ** 2))
    return f


def cauchy_initial(grid: GridSpec, S: int, q: int, a=None, perm=None) -> DensityField:
    """Cauchy bump centred at ``a`` in the single component ``perm[q]``.

    ``perm`` maps permuted positions to original components, so the field is
    ``Pi^-1 e_q`` times the bump. Renormalised to unit discrete mass.
    """
    if not 0 <= q < S:
        raise ValueError(f"component index q={q} outside 0..{S - 1}")
    perm = list(range(S)) if perm is None else list(perm)
    values = np.zeros((S,) + grid.shape)
    f = cauchy_density(grid, a)
    values[perm[q]] = f / (f.sum() * grid.dx**grid.d)
    return DensityField(grid, values)


def positivity_scan(params: EvolutionParams, p0: DensityField, t_samples) -> PositivityReport:
    t_samples = [float(t) for t in t_samples]
    if any(t < 0 for t in t_samples) or t_samples != sorted(t_samples):
        raise ValueError("t_samples must be nonnegative and sorted")
    report = PositivityReport()
    for t in t_samples:
        p = evolve(params, p0, t)
        m, loc = p.min_entry()
        report.times.append(t)
        report.mass.append(p.mass())
        report.min_entry.append(m)
        report.location.append(loc)
    return report


def write_density_csv(field_: DensityField, path) -> None:
    """CSV rows ``component,x1[,x2[,x3]],value``; component-major, then C order."""
    grid = field_.grid
    coords = [c.ravel() for c in grid.coordinates()]
    header = ["component"] + [f"x{i + 1}" for i in range(grid.d)] + ["value"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for s in range(field_.S):
            vals = field_.values[s].ravel()
            for j in range(vals.size):
                w.writerow([s] + [f"{c[j]:.17g}" for c in coords] + [f"{vals[j]:.17g}"])


def read_density_csv(path, grid: GridSpec) -> DensityField:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    S = int(data[:, 0].max()) + 1
    return DensityField(grid, data[:, -1].reshape((S,) + grid.shape))
