"""Real symmetric representations of Clifford generators and the structural
conditions for positivity preservation.

Generators are built as tensor strings over ``{I, sigma_1, sigma_3}`` so every
entry is an exact small integer and the algebraic relations hold exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.int64)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.int64)
ID2 = np.eye(2, dtype=np.int64)


class RepresentationError(ValueError):
    """Raised for malformed or invalid generator sets."""


class PerronPreconditionError(ValueError):
    """Raised when ``(I + B)/2`` is not nonnegative and irreducible."""


@dataclass(frozen=True)
class GeneratorSet:
    """The matrices ``e_0 .. e_d`` acting on ``R^S``."""

    e: tuple

    def __post_init__(self):
        mats = tuple(np.array(m) for m in self.e)
        if not mats:
            raise RepresentationError("need at least one generator")
        shape = mats[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise RepresentationError(f"e_0 is not square: shape {shape}")
        for mu, m in enumerate(mats):
            if m.shape != shape:
                raise RepresentationError(
                    f"dimension mismatch: e_{mu} has shape {m.shape}, e_0 has {shape}"
                )
            m.setflags(write=False)
        object.__setattr__(self, "e", mats)

    @property
    def d(self) -> int:
        return len(self.e) - 1

    @property
    def S(self) -> int:
        return self.e[0].shape[0]

    def as_float(self) -> np.ndarray:
        """Stacked ``(d+1, S, S)`` float view for numerical work."""
        return np.stack([m.astype(float) for m in self.e])

    def permuted(self, perm) -> "GeneratorSet":
        """Return ``Pi e_mu Pi^-1`` where row ``i`` of the result is row ``perm[i]``."""
        perm = np.asarray(perm)
        return GeneratorSet(tuple(m[np.ix_(perm, perm)] for m in self.e))


@dataclass(frozen=True)
class BlockStructure:
    permutation: tuple  # permuted position i holds original index permutation[i]
    blocks: tuple       # tuples of original indices, one per connected component

    @property
    def block_slices(self):
        """Contiguous index ranges of the blocks in permuted coordinates."""
        out, start = [], 0
        for b in self.blocks:
            out.append(range(start, start + len(b)))
            start += len(b)
        return out


@dataclass
class TheoremVerdict:
    preserves: bool
    failed_conditions: list = field(default_factory=list)
    witness: dict = field(default_factory=dict)
    permutation: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "preserves": self.preserves,
            "failed_conditions": list(self.failed_conditions),
            "witness": self.witness,
            "permutation": None if self.permutation is None else list(self.permutation),
        }


def _kron_all(factors):
    return reduce(np.kron, factors)


def build_generators(d: int) -> GeneratorSet:
    """Jordan-Wigner style chain of ``d`` tensor factors.

    ``e_mu = sigma_3^{(x)mu} (x) sigma_1 (x) I^{(x)(d-mu-1)}`` for ``mu < d`` and
    ``e_d = sigma_3^{(x)d}``, so ``S = 2**d``. For ``d = 2`` this gives
    ``sigma_1 (x) I, sigma_3 (x) sigma_1, sigma_3 (x) sigma_3``.
    """
    if int(d) != d or d < 1:
        raise RepresentationError(f"d must be a positive integer, got {d!r}")
    d = int(d)
    gens = []
    for mu in range(d):
        gens.append(_kron_all([SIGMA3] * mu + [SIGMA1] + [ID2] * (d - mu - 1)))
    gens.append(_kron_all([SIGMA3] * d))
    return GeneratorSet(tuple(gens))


def canonical_1d(m: int) -> GeneratorSet:
    """``e_0 = sigma_1^{(+)m}``, ``e_1 = sigma_3^{(+)m}`` (block diagonal)."""
    if int(m) != m or m < 1:
        raise RepresentationError(f"m must be a positive integer, got {m!r}")
    eye = np.eye(int(m), dtype=np.int64)
    return GeneratorSet((np.kron(eye, SIGMA1), np.kron(eye, SIGMA3)))


def verify_clifford(g: GeneratorSet, tol: float = 0.0) -> list:
    """List every violated relation; an empty list means ``g`` is valid.

    Entries are dicts with ``kind`` in ``{"anticommutator", "symmetry",
    "trace"}``. With the default ``tol=0`` the comparison is exact.
    """
    S = g.S
    eye = np.eye(S, dtype=g.e[0].dtype)
    report = []
    for mu, a in enumerate(g.e):
        asym = np.max(np.abs(a - a.T)) if S else 0
        if asym > tol:
            report.append({"kind": "symmetry", "mu": mu, "error": float(asym)})
        tr = abs(np.trace(a))
        if tr > tol:
            report.append({"kind": "trace", "mu": mu, "error": float(tr)})
    for mu, a in enumerate(g.e):
        for nu in range(mu, len(g.e)):
            b = g.e[nu]
            target = 2 * eye if mu == nu else 0 * eye
            err = np.max(np.abs(a @ b + b @ a - target))
            if err > tol:
                report.append({"kind": "anticommutator", "mu": mu, "nu": nu,
                               "error": float(err)})
    return report


def detect_reducibility(e0) -> BlockStructure:
    """Connected components of the nonzero pattern of a symmetric matrix."""
    e0 = np.asarray(e0)
    S = e0.shape[0]
    adj = e0 != 0
    seen = np.zeros(S, dtype=bool)
    blocks = []
    for start in range(S):
        if seen[start]:
            continue
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(adj[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        blocks.append(tuple(sorted(comp)))
    perm = tuple(i for b in blocks for i in b)
    return BlockStructure(permutation=perm, blocks=tuple(blocks))


@dataclass
class PerronResult:
    spectral_radius: float
    eigenvector: np.ndarray
    is_rank_one_projection: bool


def perron_analysis(block, atol: float = 1e-12) -> PerronResult:
    """Perron-Frobenius data of ``P = (I + B)/2`` for a symmetric block ``B``."""
    B = np.asarray(block, dtype=float)
    n = B.shape[0]
    P = 0.5 * (np.eye(n) + B)
    if np.any(P < 0):
        i, j = np.argwhere(P < 0)[0]
        raise PerronPreconditionError(
            f"(I+B)/2 has negative entry {P[i, j]} at ({i}, {j})")
    if len(detect_reducibility(P - np.diag(np.diag(P))).blocks) > 1:
        raise PerronPreconditionError("(I+B)/2 is reducible")
    w, v = np.linalg.eigh(P)
    radius = float(w[-1])
    u = v[:, -1]
    u = u if u.sum() >= 0 else -u
    simple = n == 1 or (w[-1] - w[-2]) > atol
    rank_one = bool(np.allclose(P, np.outer(u, u), atol=atol, rtol=0))
    return PerronResult(radius, u if simple else u * np.nan, rank_one)


def _e0_shape(e0, blocks: BlockStructure):
    """Return (ok, witness) for the ``sigma_1^{(+)m}`` condition on ``e_0``."""
    off = np.argwhere((e0 < 0) & ~np.eye(e0.shape[0], dtype=bool))
    if len(off):
        p, q = (int(x) for x in off[0])
        return False, {"negative_offdiagonal": [p, q], "value": float(e0[p, q])}
    diag = np.flatnonzero(np.diag(e0) < -1)
    if len(diag):
        return False, {"diagonal_below_minus_one": int(diag[0])}
    for b in blocks.blocks:
        if len(b) != 2:
            return False, {"block": list(b), "reason": f"block of size {len(b)}"}
        sub = e0[np.ix_(b, b)]
        try:
            res = perron_analysis(sub)
        except PerronPreconditionError as exc:
            return False, {"block": list(b), "reason": str(exc)}
        if not res.is_rank_one_projection or not np.array_equal(sub, SIGMA1):
            return False, {"block": list(b), "reason": "block is not sigma_1",
                           "perron_vector": [float(x) for x in res.eigenvector]}
    return True, None


def _e1_shape(e1p, blocks: BlockStructure):
    """In block coordinates ``e_1`` must be block diagonal with blocks ``+-sigma_3``."""
    slices = blocks.block_slices
    label = np.empty(e1p.shape[0], dtype=int)
    for n, r in enumerate(slices):
        label[list(r)] = n
    nz = np.argwhere(e1p != 0)
    for p, q in nz:
        if label[p] != label[q]:
            return False, {"offblock_entry": [int(p), int(q)], "value": float(e1p[p, q])}
    for r in slices:
        sub = e1p[np.ix_(list(r), list(r))]
        if not (np.array_equal(sub, SIGMA3) or np.array_equal(sub, -SIGMA3)):
            return False, {"block": list(r), "reason": "block is not +-sigma_3"}
    return True, None


def theorem_check(g: GeneratorSet, alpha: float) -> TheoremVerdict:
    """Decide positivity preservation from the three structural conditions.

    The returned ``permutation`` (when ``e_0`` passes) brings ``e_0`` to
    ``sigma_1^{(+)m}`` and ``e_1`` to ``sigma_3^{(+)m}``; it includes the
    within-block swaps that turn ``-sigma_3`` blocks into ``sigma_3``.
    """
    report = verify_clifford(g)
    if report:
        raise RepresentationError(f"invalid generator set: {report[0]}")
    failed, witness = [], {}
    if g.d != 1:
        failed.append("dimension")
        witness["dimension"] = g.d
    blocks = detect_reducibility(g.e[0])
    e0_ok, w = _e0_shape(np.asarray(g.e[0]), blocks)
    if not e0_ok:
        failed.append("e0_shape")
        witness["e0_shape"] = w
    perm = list(blocks.permutation)
    e1p = np.asarray(g.e[1])[np.ix_(perm, perm)]
    e1_ok, w = _e1_shape(e1p, blocks)
    if not e1_ok:
        failed.append("e1_shape")
        witness["e1_shape"] = w
    elif e0_ok:
        for r in blocks.block_slices:
            i, j = r.start, r.start + 1
            if e1p[i, i] < 0:
                perm[i], perm[j] = perm[j], perm[i]
    if alpha != 1.0:
        failed.append("alpha")
        witness["alpha"] = alpha
    return TheoremVerdict(
        preserves=not failed,
        failed_conditions=failed,
        witness=witness,
        permutation=tuple(perm) if e0_ok else None,
    )
