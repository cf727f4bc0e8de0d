"""Sparse code families and synthetic datasets.

Codes live in columns of an m x N matrix, each column carrying an explicit
support set. The power-node construction produces, for any count, codes on a
shared support with any k of them linearly independent.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, geometry
from .errors import CapExceededError, GenerationError, HypothesisError
from .hypergraph import has_sip, normalize_support, pairwise_unions, regularity

logger = logging.getLogger(__name__)

DEFAULT_SUBSET_CAP = 200_000
GENERATE_MAX_RETRIES = 10


@dataclass
class SparseCodeSet:
    """m x N matrix of at-most-k-sparse columns with per-column support sets."""

    m: int
    codes: np.ndarray
    supports: tuple
    k: int

    def __post_init__(self):
        self.codes = np.asarray(self.codes, dtype=float)
        if self.codes.ndim != 2 or self.codes.shape[0] != self.m:
            raise ValueError("codes must be an (m, N) array")
        if not np.all(np.isfinite(self.codes)):
            raise ValueError("codes have non-finite entries")
        self.supports = tuple(normalize_support(s, self.m) for s in self.supports)
        if len(self.supports) != self.codes.shape[1]:
            raise ValueError("one support set per code column required")
        for col, support in enumerate(self.supports):
            if len(support) > self.k:
                raise ValueError(f"support of column {col} larger than k={self.k}")
            outside = np.ones(self.m, dtype=bool)
            outside[[v - 1 for v in support]] = False
            if np.any(self.codes[outside, col] != 0.0):
                raise ValueError(f"column {col} has entries outside its support")

    @property
    def n_codes(self):
        return self.codes.shape[1]

    def column(self, i):
        return self.codes[:, i]

    def l1_norms(self):
        return np.abs(self.codes).sum(axis=0)


def merge_code_sets(code_sets):
    """Concatenate code sets over a common vertex count."""
    sets = list(code_sets)
    if not sets:
        raise ValueError("nothing to merge")
    m = sets[0].m
    if any(cs.m != m for cs in sets):
        raise ValueError("vertex counts differ")
    codes = np.hstack([cs.codes for cs in sets])
    supports = tuple(s for cs in sets for s in cs.supports)
    return SparseCodeSet(m, codes, supports, max(cs.k for cs in sets))


def vandermonde_codes(support, count, gammas, m=None):
    """Codes gamma_i^j (j = 1..count) placed on a shared support.

    For distinct positive nodes any k = |support| of the resulting columns
    are linearly independent. Nodes must be distinct and nonzero; counts that
    would push gamma^count outside [1e-300, 1e300] are rejected.
    """
    if m is None:
        m = max(support)
    support = normalize_support(support, m)
    gammas = [float(g) for g in gammas]
    if len(gammas) != len(support):
        raise ValueError("need one node per support vertex")
    if count < 1:
        raise ValueError("count must be positive")
    if any(g == 0.0 for g in gammas):
        raise ValueError("nodes must be nonzero")
    if len(set(gammas)) != len(gammas):
        raise ValueError("nodes must be distinct")
    for g in gammas:
        magnitude = count * math.log10(abs(g))
        if magnitude < -300 or magnitude > 300:
            raise ValueError(f"|{g}|^{count} outside the representable range")
    codes = np.zeros((m, count))
    powers = np.arange(1, count + 1)
    for row, g in zip((v - 1 for v in support), gammas):
        codes[row] = g ** powers
    return SparseCodeSet(m, codes, (support,) * count, len(support))


def general_linear_position(vectors, k, rank_tol=geometry.DEFAULT_RANK_TOL,
                            subset_cap=DEFAULT_SUBSET_CAP, samples=None, rng=None):
    """True iff every k of the vectors are linearly independent.

    Exhaustive over all k-subsets when their number is within ``subset_cap``;
    beyond that, ``samples`` random subsets are checked instead (requires
    ``samples``; the coverage fraction is logged). Independence is judged by
    the subset's smallest singular value clearing rank_tol times the largest
    singular value of the whole stack.
    """
    mat = np.asarray(vectors, dtype=float)
    if mat.ndim == 1:
        mat = mat[:, None]
    if mat.ndim != 2:
        raise ValueError("vectors must stack into a 2-D array")
    count = mat.shape[1]
    if k < 1:
        raise ValueError("k must be positive")
    if count < k:
        return True
    smax = float(np.linalg.svd(mat, compute_uv=False)[0])
    if smax == 0.0:
        return False
    n_subsets = math.comb(count, k)
    if n_subsets <= subset_cap:
        subsets = list(itertools.combinations(range(count), k))
    else:
        if samples is None:
            raise CapExceededError(
                f"{n_subsets} subsets exceed cap {subset_cap}; pass samples= to sample"
            )
        if rng is None:
            rng = np.random.default_rng()
        subsets = [tuple(sorted(rng.choice(count, size=k, replace=False)))
                   for _ in range(samples)]
        logger.info(
            "general linear position sampled %d of %d subsets (coverage %.2e)",
            len(subsets), n_subsets, len(subsets) / n_subsets,
        )
    sv = _kernels.edge_min_singular_values(mat, subsets)
    return bool(np.min(sv) > rank_tol * smax)


def support_index_sets(codes, hypergraph):
    """For each edge S, the 0-based code columns whose support is contained in S."""
    edge_sets = {edge: set(edge) for edge in hypergraph.edges}
    result = {edge: [] for edge in hypergraph.edges}
    for col, support in enumerate(codes.supports):
        s = set(support)
        for edge, vertices in edge_sets.items():
            if s <= vertices:
                result[edge].append(col)
    return result


@dataclass
class Dataset:
    """Noisy signals z_i = A x_i + n_i with per-sample noise norm at most eta."""

    signals: np.ndarray
    eta: float
    dictionary: np.ndarray | None = None
    codes: SparseCodeSet | None = None
    noise: np.ndarray | None = None


def synthesize_dataset(dictionary, codes, eta, seed=None, worst_case=False):
    """Generate signals dictionary @ codes plus norm-bounded noise.

    Noise directions are uniform on the sphere; radii are eta * U^(1/n)
    (uniform in the eta-ball) or exactly eta when ``worst_case`` is set.
    The bound ||n_i|| <= eta is enforced exactly and the draw is
    deterministic under ``seed``.
    """
    mat = geometry.as_matrix(dictionary, "dictionary")
    if mat.shape[1] != codes.m:
        raise ValueError("dictionary columns and code rows differ")
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    n, count = mat.shape[0], codes.n_codes
    clean = mat @ codes.codes
    if eta == 0.0:
        noise = np.zeros_like(clean)
    else:
        rng = np.random.default_rng(seed)
        directions = rng.standard_normal((n, count))
        norms = np.linalg.norm(directions, axis=0)
        norms[norms == 0.0] = 1.0
        directions /= norms
        if worst_case:
            radii = np.full(count, eta)
        else:
            radii = eta * rng.uniform(0.0, 1.0, count) ** (1.0 / n)
        noise = directions * radii
        achieved = np.linalg.norm(noise, axis=0)
        over = achieved > eta
        if np.any(over):
            noise[:, over] *= eta / achieved[over]
    return Dataset(clean + noise, float(eta), mat, codes, noise)


def generate_instance(m, n, k, hypergraph, per_support_count, seed=None,
                      max_retries=GENERATE_MAX_RETRIES,
                      rank_tol=geometry.DEFAULT_RANK_TOL):
    """Random dictionary plus per-edge power-node codes, verified post hoc.

    The dictionary has independent standard normal entries; each edge gets
    ``per_support_count`` codes with nodes drawn from [0.5, 1.5] (distinct by
    rejection). The draw is accepted only if the instance passes all
    certificate hypotheses: SIP, regularity, positive restricted lower bound
    over pairwise unions, the spark condition, general linear position per
    support, and the per-support counts. Retries with fresh randomness up to
    ``max_retries`` times, then raises GenerationError.
    """
    if n < min(2 * k, m):
        raise ValueError(f"need n >= min(2k, m) = {min(2 * k, m)}, got n={n}")
    if per_support_count < 1:
        raise ValueError("per_support_count must be positive")
    if hypergraph.m != m or hypergraph.k != k:
        raise ValueError("hypergraph does not match the requested (m, k)")
    if not has_sip(hypergraph):
        raise HypothesisError("hypergraph lacks the singleton intersection property")
    if regularity(hypergraph) is None:
        raise HypothesisError("hypergraph is not regular")
    rng = np.random.default_rng(seed)
    unions = pairwise_unions(hypergraph)
    for _ in range(max_retries):
        mat = rng.standard_normal((n, m))
        blocks = []
        for edge in hypergraph.edges:
            while True:
                gammas = rng.uniform(0.5, 1.5, size=k)
                if len(set(gammas)) == k:
                    break
            blocks.append(vandermonde_codes(edge, per_support_count, gammas, m=m))
        codes = merge_code_sets(blocks)
        if _instance_verified(mat, codes, hypergraph, unions, per_support_count,
                              k, rank_tol):
            return mat, codes
    raise GenerationError(f"no verified instance after {max_retries} attempts")


def _instance_verified(mat, codes, hypergraph, unions, per_support_count, k,
                       rank_tol):
    smax = float(np.linalg.svd(mat, compute_uv=False)[0])
    if geometry.restricted_lower_bound(mat, unions) <= rank_tol * smax:
        return False
    if not geometry.spark_condition(mat, k, rank_tol):
        return False
    index_sets = support_index_sets(codes, hypergraph)
    for edge in hypergraph.edges:
        ids = index_sets[edge]
        if len(ids) < per_support_count:
            return False
        if not general_linear_position(codes.codes[:, ids], k, rank_tol,
                                       samples=20_000,
                                       rng=np.random.default_rng(len(ids))):
            return False
    return True
