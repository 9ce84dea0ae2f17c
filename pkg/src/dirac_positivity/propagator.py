"""Fourier-space evolution matrix of the massive Euclidean Dirac equation.

For a wave vector ``k`` the mode equation is ``dphi/dt = A(k) phi`` with

    A(k) = -alpha I + e_0 + i sum_mu k_mu e_mu.

Because ``(e_0 + i k.e)^2 = (1 - |k|^2) I`` the exponential has the closed form

    D(k, t) = exp(-alpha t) [cosh(beta t) I + sinhc(beta, t) (e_0 + i k.e)],

with ``beta^2 = 1 - |k|^2`` and ``sinhc(beta, t) = sinh(beta t) / beta``. Both
scalar factors are even in ``beta`` and therefore real for every real ``k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford_reps import GeneratorSet, RepresentationError, verify_clifford

# below this |beta^2| t^2 the series for sinh(beta t)/beta is used
_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class EvolutionParams:
    alpha: float
    g: GeneratorSet

    def __post_init__(self):
        bad = verify_clifford(self.g, tol=1e-12)
        if bad:
            raise RepresentationError(f"invalid generator set: {bad[0]}")


@dataclass(frozen=True)
class PropagatorMatrix:
    k: np.ndarray
    t: float
    M: np.ndarray


@dataclass(frozen=True)
class RealBlockPropagator:
    D00: np.ndarray
    D01: np.ndarray
    D10: np.ndarray
    D11: np.ndarray

    def as_real_matrix(self) -> np.ndarray:
        """The ``2S x 2S`` real matrix acting on ``(Re phi, Im phi)``."""
        return np.block([[self.D00, self.D01], [self.D10, self.D11]])


@dataclass(frozen=True)
class StochasticityReport:
    t: float
    column_sums: np.ndarray
    min_entry: float

    def is_stochastic(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.column_sums - 1) <= tol) and self.min_entry >= -1e-15)


def _as_k(k, d: int) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (d,):
        raise ValueError(f"wave vector must have {d} components, got shape {k.shape}")
    return k


def beta_squared(k) -> np.ndarray:
    """``1 - |k|^2``, summing over the last axis."""
    k = np.asarray(k, dtype=float)
    return 1.0 - np.sum(k * k, axis=-1) if k.ndim else 1.0 - k * k


def beta(k) -> complex:
    """``sqrt(1 - |k|^2)``: real for ``|k| <= 1``, positive imaginary beyond."""
    b2 = float(beta_squared(np.atleast_1d(k)))
    return complex(math.sqrt(b2)) if b2 >= 0 else complex(0.0, math.sqrt(-b2))


def cosh_factor(b2, t):
    """``cosh(beta t)`` as a real function of ``beta^2``."""
    b2 = np.atleast_1d(np.asarray(b2, dtype=float))
    r = np.sqrt(np.abs(b2))
    out = np.cos(r * t)
    pos = b2 > 0
    out[pos] = np.cosh(r[pos] * t)
    return out


def sinhc_factor(b2, t):
    """``sinh(beta t) / beta`` as a real function of ``beta^2``, finite at ``beta = 0``."""
    b2 = np.atleast_1d(np.asarray(b2, dtype=float))
    r = np.sqrt(np.abs(b2))
    x = b2 * t * t
    out = t * (1.0 + x / 6.0 + x * x / 120.0)
    pos = x >= _SERIES_CUTOFF
    neg = x <= -_SERIES_CUTOFF
    out[pos] = np.sinh(r[pos] * t) / r[pos]
    out[neg] = np.sin(r[neg] * t) / r[neg]
    return out


def propagator(params: EvolutionParams, k, t: float) -> PropagatorMatrix:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    e = params.g.as_float()
    k = _as_k(k, params.g.d)
    b2 = beta_squared(k)
    damp = math.exp(-params.alpha * t)
    gen = e[0] + 1j * np.tensordot(k, e[1:], axes=1)
    M = damp * (cosh_factor(b2, t)[0] * np.eye(params.g.S) + sinhc_factor(b2, t)[0] * gen)
    return PropagatorMatrix(k=k, t=float(t), M=M)


def generator_matrix(params: EvolutionParams, k) -> np.ndarray:
    """``-alpha I + e_0 + i k.e`` for one wave vector."""
    e = params.g.as_float()
    k = _as_k(k, params.g.d)
    return -params.alpha * np.eye(params.g.S) + e[0] + 1j * np.tensordot(k, e[1:], axes=1)


def _expm_taylor(A: np.ndarray, order: int = 20) -> np.ndarray:
    """Scaling and squaring around a truncated Taylor series."""
    norm = np.max(np.sum(np.abs(A), axis=0)) if A.size else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm / 0.25)))) if norm > 0.25 else 0
    X = A / 2.0**squarings
    n = A.shape[0]
    E = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for j in range(1, order + 1):
        term = term @ X / j
        E = E + term
    for _ in range(squarings):
        E = E @ E
    return E


def expm_oracle(params: EvolutionParams, k, t: float) -> PropagatorMatrix:
    """Evolution matrix by direct exponentiation of the mode generator."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    A = generator_matrix(params, k) * t
    return PropagatorMatrix(k=_as_k(k, params.g.d), t=float(t), M=_expm_taylor(A))


def real_blocks(params: EvolutionParams, k, t: float) -> RealBlockPropagator:
    """Blocks of ``D`` on ``C^S = R^S (+) R^S`` from the analytic block formulas."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    e = params.g.as_float()
    k = _as_k(k, params.g.d)
    b2 = beta_squared(k)
    damp = math.exp(-params.alpha * t)
    ch, sh = cosh_factor(b2, t)[0], sinhc_factor(b2, t)[0]
    D00 = damp * (ch * np.eye(params.g.S) + sh * e[0])
    D10 = damp * sh * np.tensordot(k, e[1:], axes=1)
    return RealBlockPropagator(D00=D00, D01=-D10, D10=D10, D11=D00.copy())


def zero_mode_stochasticity(params: EvolutionParams, t: float) -> StochasticityReport:
    """Column sums and minimum entry of ``D_00(0, t)``."""
    D00 = real_blocks(params, np.zeros(params.g.d), t).D00
    return StochasticityReport(t=float(t), column_sums=D00.sum(axis=0),
                               min_entry=float(D00.min()))


def apply_propagator(params: EvolutionParams, kgrid: np.ndarray, t: float,
                     modes: np.ndarray) -> np.ndarray:
    """Apply ``D(k, t)`` mode by mode without forming the matrices.

    ``kgrid`` has shape ``(d, M)`` and ``modes`` shape ``(S, M)``.
    """
    e = params.g.as_float()
    b2 = 1.0 - np.sum(kgrid * kgrid, axis=0)
    damp = math.exp(-params.alpha * t)
    ch = damp * cosh_factor(b2, t)
    sh = damp * sinhc_factor(b2, t)
    spatial = np.zeros_like(modes)
    for mu in range(params.g.d):
        spatial += kgrid[mu] * (e[mu + 1] @ modes)
    return ch * modes + sh * (e[0] @ modes + 1j * spatial)
