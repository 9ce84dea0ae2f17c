"""Necessary conditions for positivity and explicit counterexamples.

A nonnegative density has a positive definite Fourier transform, a stochastic
zero mode, and ``Re Phi(0) + Re Phi(k) >= 0`` componentwise. For ``d >= 2``
some spatial generator couples components that ``e_0`` leaves in different
blocks; a shifted Cauchy bump placed in one of them then drives the other
negative at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clifford_reps import GeneratorSet, detect_reducibility, theorem_check
from .propagator import EvolutionParams, sinhc_factor
from .spectral_solver import DensityField, GridSpec, cauchy_initial, positivity_scan

PSD_TOL = 1e-10
INEQ_TOL = 1e-10
WITNESS_TOL = 1e-12
DEFAULT_K = 0.5
DEFAULT_TIMES = (0.25, 0.5, 1.0, 2.0)


class MissingDifferenceError(KeyError):
    pass


class WitnessPreconditionError(ValueError):
    pass


class InternalInconsistencyError(RuntimeError):
    """Raised when a non-preserving system yields no analytic witness."""


@dataclass
class Witness:
    kind: str  # "analytic_F_INEQ" or "grid_violation"
    p: int
    q: int
    nu: int
    K: float
    a: list
    t: float
    value: float
    grid: GridSpec | None = None
    location: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.value < 0:
            raise ValueError(f"a witness needs a negative value, got {self.value}")

    def to_dict(self) -> dict:
        g = self.grid
        return {
            "kind": self.kind,
            "p": self.p,
            "q": self.q,
            "nu": self.nu,
            "K": self.K,
            "a": [float(x) for x in self.a],
            "t": self.t,
            "value": self.value,
            "grid": None if g is None else {"d": g.d, "n": g.n, "L": g.L},
        }


WITNESS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind", "p", "q", "nu", "K", "a", "t", "value", "grid"],
    "properties": {
        "kind": {"enum": ["analytic_F_INEQ", "grid_violation"]},
        "p": {"type": "integer", "minimum": 0},
        "q": {"type": "integer", "minimum": 0},
        "nu": {"type": "integer", "minimum": 1},
        "K": {"type": "number"},
        "a": {"type": "array", "items": {"type": "number"}},
        "t": {"type": "number", "minimum": 0},
        "value": {"type": "number", "exclusiveMaximum": 0},
        "grid": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["d", "n", "L"],
                    "properties": {
                        "d": {"type": "integer", "minimum": 1},
                        "n": {"type": "integer", "minimum": 8},
                        "L": {"type": "number", "exclusiveMinimum": 0},
                    },
                },
            ]
        },
    },
}


@dataclass
class BochnerResult:
    min_eigenvalue: float
    is_psd: bool
    matrix: np.ndarray


def bochner_matrix_check(phi, points, component=None, tol: float = PSD_TOL) -> BochnerResult:
    """Minimum eigenvalue of ``F_ab = phi(k_a - k_b)`` over a finite point set.

    ``phi`` is a callable or a mapping keyed by difference vectors (as tuples);
    vector-valued ``phi`` needs ``component``.
    """
    pts = [np.atleast_1d(np.asarray(k, dtype=float)) for k in points]
    N = len(pts)
    F = np.empty((N, N), dtype=complex)
    for a in range(N):
        for b in range(N):
            diff = pts[a] - pts[b]
            if callable(phi):
                val = phi(diff)
            else:
                key = tuple(float(x) for x in diff)
                if key not in phi:
                    raise MissingDifferenceError(f"no value supplied at k = {key}")
                val = phi[key]
            val = np.asarray(val)
            F[a, b] = val[component] if component is not None else val
    herm = 0.5 * (F + F.conj().T)
    lam = float(np.linalg.eigvalsh(herm)[0]) if N else 0.0
    return BochnerResult(lam, lam >= -tol, F)


def grid_transform_lookup(p: DensityField):
    """Callable returning ``Phi[p](k)`` (all components) for on-lattice ``k``.

    The discrete transform is periodic with period ``2 pi / dx`` per axis, so
    differences of lattice wave numbers are reduced modulo that period.
    """
    grid = p.grid
    phi = p.transform()
    step = np.pi / grid.L

    def lookup(k):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        j = k / step
        ji = np.rint(j)
        if np.any(np.abs(j - ji) > 1e-8):
            raise MissingDifferenceError(f"k = {k} is not on the grid lattice")
        idx = tuple(int(x) % grid.n for x in ji)
        return phi[(slice(None),) + idx]

    return lookup


def ineq_necessary_check(varphi0, varphik, tol: float = INEQ_TOL) -> np.ndarray:
    """Componentwise ``Re Phi(0) + Re Phi(k) >= 0``; ``True`` where it holds."""
    v0 = np.asarray(varphi0, dtype=float)
    vk = np.asarray(varphik, dtype=float)
    if v0.shape != vk.shape:
        raise ValueError(f"length mismatch: {v0.shape} vs {vk.shape}")
    return v0 + vk >= -tol


def e0_entry_constraints(e0, alpha: float = 1.0, times=(0.1, 1.0, 10.0),
                         rtol: float = 1e-12) -> list:
    """Entry bounds and the column-sum identity that a stochastic zero mode needs.

    Returns a list of violations, each a dict with ``kind`` in ``{"diagonal",
    "offdiagonal", "column_sum"}`` and the offending indices.
    """
    e0 = np.asarray(e0, dtype=float)
    S = e0.shape[0]
    out = []
    for p in range(S):
        if e0[p, p] < -1:
            out.append({"kind": "diagonal", "index": [p, p], "value": float(e0[p, p])})
        for q in range(S):
            if p != q and e0[p, q] < 0:
                out.append({"kind": "offdiagonal", "index": [p, q], "value": float(e0[p, q])})
    colsum = e0.sum(axis=0)
    for q in range(S):
        for t in times:
            lhs = math.cosh(t) + math.sinh(t) * colsum[q]
            rhs = math.exp(alpha * t)
            if abs(lhs - rhs) > rtol * rhs:
                out.append({"kind": "column_sum", "index": [q], "t": t,
                            "lhs": lhs, "rhs": rhs})
                break
    return out


def alpha_eq_residual(u, q: int, t: float, alpha: float) -> float:
    """``exp(-t) + (exp(t) - exp(-t)) u_q sum(u) - exp(alpha t)`` for ``e_0 = 2uu^T - I``."""
    u = np.asarray(u, dtype=float)
    return math.exp(-t) + (math.exp(t) - math.exp(-t)) * u[q] * u.sum() - math.exp(alpha * t)


def cauchy_transform(k) -> float:
    """Fourier transform of the product Cauchy density, ``exp(-sum |k_mu|)``."""
    return math.exp(-float(np.sum(np.abs(np.atleast_1d(k)))))


def aux_functions(g_of_k: float, K: float, a: float, t: float):
    """``(B, C)`` with ``B = g cos(Ka) sinhc`` and ``C = -g sin(Ka) sinhc``.

    ``sinhc = sinh(beta t)/beta`` and ``beta^2 = 1 - K^2``.
    """
    if not g_of_k > 0:
        raise ValueError(f"g_of_k must be positive, got {g_of_k}")
    sh = float(sinhc_factor(1.0 - K * K, t)[0])
    return g_of_k * math.cos(K * a) * sh, -g_of_k * math.sin(K * a) * sh


def f_ineq_rhs(g: GeneratorSet, perm, p: int, q: int, nu: int, K: float, t: float) -> float:
    """``-g(K e_nu) sinhc(beta, t) K (e_nu)_pq`` in the permuted basis."""
    ehat = g.permuted(perm)
    sh = float(sinhc_factor(1.0 - K * K, t)[0])
    kvec = np.zeros(g.d)
    kvec[nu - 1] = K
    return -cauchy_transform(kvec) * sh * K * float(ehat.e[nu][p, q])


def f_ineq_witness(g: GeneratorSet, perm, p: int, q: int, nu: int,
                   K: float = DEFAULT_K, t: float = 1.0):
    """Analytic witness from an off-block entry, or ``None`` if ``(e_nu)_pq = 0``.

    The right-hand side is odd in ``K``, so it is negative at ``K`` or ``-K``
    whenever ``(e_nu)_pq`` and ``K`` are nonzero.
    """
    ehat = g.permuted(perm)
    if p == q:
        raise WitnessPreconditionError("p and q must differ")
    if ehat.e[0][p, q] != 0:
        raise WitnessPreconditionError(
            f"(e_0)[{p},{q}] = {ehat.e[0][p, q]} is not in an off-diagonal block")
    if not 1 <= nu <= g.d:
        raise WitnessPreconditionError(f"nu must be in 1..{g.d}, got {nu}")
    best = None
    for kk in (K, -K):
        val = f_ineq_rhs(g, perm, p, q, nu, kk, t)
        if val < -WITNESS_TOL and (best is None or val < best[1]):
            best = (kk, val)
    if best is None:
        return None
    kk, val = best
    a = np.zeros(g.d)
    a[nu - 1] = math.pi / (2 * kk)
    return Witness("analytic_F_INEQ", p, q, nu, kk, list(a), float(t), val)


def analytic_candidates(g: GeneratorSet, perm, K: float = DEFAULT_K, t: float = 1.0) -> list:
    """All analytic witnesses over off-block ``(p, q)`` pairs and directions ``nu``."""
    e0 = g.permuted(perm).e[0]
    out = []
    for p in range(g.S):
        for q in range(g.S):
            if p == q or e0[p, q] != 0:
                continue
            for nu in range(1, g.d + 1):
                w = f_ineq_witness(g, perm, p, q, nu, K, t)
                if w is not None:
                    out.append(w)
    return out


def find_counterexample(g: GeneratorSet, alpha: float, grid: GridSpec,
                        K: float = DEFAULT_K, times=DEFAULT_TIMES) -> Witness:
    """Evolve the Cauchy recipe for an analytic witness and report the worst entry.

    The returned ``p`` is the permuted index of the component where the grid
    minimum occurs, ``nu`` a direction for which ``(p, q, nu)`` is itself an
    analytic witness when one exists.
    """
    verdict = theorem_check(g, alpha)
    if verdict.preserves or set(verdict.failed_conditions) == {"alpha"}:
        raise WitnessPreconditionError(
            "system fails no structural condition; positivity is not broken by the recipe")
    if grid.d != g.d:
        raise ValueError(f"grid has d={grid.d}, generators have d={g.d}")
    perm = detect_reducibility(g.e[0]).permutation
    cands = analytic_candidates(g, perm, K)
    if not cands:
        raise InternalInconsistencyError(
            f"no analytic witness for a non-preserving system (failed: {verdict.failed_conditions})")
    w0 = min(cands, key=lambda w: (w.q, w.nu, w.p))
    p0 = cauchy_initial(grid, g.S, w0.q, w0.a, perm)
    report = positivity_scan(EvolutionParams(alpha, g), p0, times)
    i = report.worst()
    value = report.min_entry[i]
    comp, site = report.location[i]
    p_hit = list(perm).index(comp)
    flagged = [w.nu for w in cands if w.p == p_hit and w.q == w0.q]
    nu = flagged[0] if flagged else w0.nu
    if not value < 0:
        raise InternalInconsistencyError(f"recipe produced no negative entry (min {value})")
    return Witness("grid_violation", p_hit, w0.q, nu, w0.K, list(w0.a), report.times[i],
                   float(value), grid, (comp, site))
