"""Stability constants, recovery thresholds, sample-size formulas, and the
certificate that bundles them with the hypothesis checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import geometry
from .codes import DEFAULT_SUBSET_CAP, general_linear_position, support_index_sets
from .errors import CapExceededError, HypothesisError
from .hypergraph import has_sip, pairwise_unions, regularity

# Groups of r+1 edges are enumerated when maximizing xi.
DEFAULT_GROUP_CAP = 100_000
# Below this the code family is treated as failing general linear position.
C1_DENOM_TOL = 1e-12


def compute_C2(dictionary, hypergraph, rank_tol=geometry.DEFAULT_RANK_TOL,
               group_cap=DEFAULT_GROUP_CAP):
    """Geometry-only stability constant of a dictionary over a regular hypergraph.

    (r + 1) times the largest column norm, divided by one minus the largest
    xi over all groups of r + 1 edge spans. Requires a regular hypergraph;
    a nonpositive denominator signals xi reaching 1 (degenerate geometry).
    """
    mat = geometry.as_matrix(dictionary, "dictionary")
    if hypergraph.m != mat.shape[1]:
        raise ValueError("hypergraph vertices must index dictionary columns")
    r = regularity(hypergraph)
    if r is None:
        raise HypothesisError("hypergraph is not regular")
    n_groups = math.comb(len(hypergraph.edges), r + 1)
    if n_groups > group_cap:
        raise CapExceededError(f"{n_groups} edge groups exceed cap {group_cap}")
    spans = {e: geometry.column_span(mat, e, rank_tol) for e in hypergraph.edges}
    worst = 0.0
    for group in itertools.combinations(hypergraph.edges, r + 1):
        value = geometry.xi([spans[e] for e in group], rank_tol,
                            ordering_cap=max(geometry.DEFAULT_ORDERING_CAP, r + 1))
        if value > worst:
            worst = value
    denominator = 1.0 - worst
    if denominator <= 0.0:
        raise HypothesisError(
            "edge-span geometry is degenerate (ordering aggregate reached 1)"
        )
    max_column = float(np.max(np.linalg.norm(mat, axis=0)))
    return (r + 1) * max_column / denominator


def compute_C1(dictionary, codes, hypergraph, rank_tol=geometry.DEFAULT_RANK_TOL,
               group_cap=DEFAULT_GROUP_CAP):
    """Full stability constant: compute_C2 over the worst per-support code bound.

    The denominator is the minimum over edges S of the restricted lower bound
    (at the uniform edge size) of dictionary @ codes restricted to the codes
    supported in S. Every edge needs at least k codes; a denominator at or
    below 1e-12 is reported as a general-linear-position failure.
    """
    mat = geometry.as_matrix(dictionary, "dictionary")
    if hypergraph.k is None:
        raise HypothesisError("hypergraph must be uniform")
    k = hypergraph.k
    index_sets = support_index_sets(codes, hypergraph)
    c2 = compute_C2(mat, hypergraph, rank_tol, group_cap)
    denominator = math.inf
    for edge in hypergraph.edges:
        ids = index_sets[edge]
        if not ids:
            raise HypothesisError(f"no codes supported in {edge}")
        if len(ids) < k:
            raise HypothesisError(f"fewer than {k} codes supported in {edge}")
        stacked = mat @ codes.codes[:, ids]
        denominator = min(denominator, geometry.lower_bound_k(stacked, k))
    if denominator <= C1_DENOM_TOL:
        raise HypothesisError(
            "per-support code bound vanished (codes not in general linear position)"
        )
    return c2 / denominator


def epsilon_for(delta1, delta2, c1, l2k, max_l1):
    """Residual threshold guaranteeing recovery within (delta1, delta2).

    min(delta1 / c1, delta2 * l2k / (1 + c1 * (delta2 + max_l1))); strictly
    positive whenever both deltas are.
    """
    if delta1 < 0 or delta2 < 0:
        raise ValueError("deltas must be nonnegative")
    if c1 <= 0 or l2k <= 0:
        raise ValueError("c1 and l2k must be positive")
    if max_l1 < 0:
        raise ValueError("max_l1 must be nonnegative")
    return min(delta1 / c1, delta2 * l2k / (1.0 + c1 * (delta2 + max_l1)))


def sample_size_cor1(m, k, hypergraph):
    """Sufficient total sample count: |H| * ((k-1) * C(m, k) + 1)."""
    if hypergraph.k != k:
        raise ValueError("hypergraph is not k-uniform for the given k")
    if hypergraph.m != m:
        raise ValueError("hypergraph vertex count differs from m")
    return len(hypergraph.edges) * ((k - 1) * math.comb(m, k) + 1)


class SampleRequirement(NamedTuple):
    per_support: int
    total: int


def sample_size_thm2(m_bar, k, hypergraph):
    """Per-support and total counts for the minimal-support-size formulation.

    Per support: (k-1) * (C(m_bar, k) + |H| * k * C(m_bar, k-1)) + 1.
    """
    if m_bar < 1 or k < 1:
        raise ValueError("m_bar and k must be positive")
    edges = len(hypergraph.edges)
    per_support = (k - 1) * (math.comb(m_bar, k) + edges * k * math.comb(m_bar, k - 1)) + 1
    return SampleRequirement(per_support, edges * per_support)


@dataclass
class StabilityCertificate:
    """Computed constants, thresholds, and hypothesis flags for an instance.

    ``eps_max_codes`` is present only when the spark condition holds; the
    code-recovery tier of the guarantee needs it. ``required_per_support`` is
    the per-edge code count the sufficient-sample bound asks for.
    """

    m: int
    n: int
    k: int
    m_bar: int | None
    r: int | None
    L2: float
    L2k: float
    L2H: float
    C2: float | None
    C1: float | None
    eps_max_dictionary: float | None
    eps_max_codes: float | None
    max_code_l1: float
    support_counts: dict
    required_per_support: int
    sip_ok: bool
    regular_ok: bool
    lower_bound_ok: bool
    glp_ok: bool
    spark_ok: bool
    counts_ok: bool

    @property
    def hypotheses_ok(self):
        """Dictionary-recovery hypotheses; the spark flag only gates the code tier."""
        return (self.sip_ok and self.regular_ok and self.lower_bound_ok
                and self.glp_ok and self.counts_ok)


def build_certificate(dictionary, codes, hypergraph,
                      rank_tol=geometry.DEFAULT_RANK_TOL, m_bar=None,
                      glp_subset_cap=DEFAULT_SUBSET_CAP, glp_samples=20_000):
    """Run every hypothesis check and assemble the stability certificate.

    Never raises on failed hypotheses: flags record what failed and the
    constants that remain computable are still reported (C1/C2 are None when
    their own preconditions break). Per-support position checks fall back to
    ``glp_samples`` deterministic random subsets when the exhaustive subset
    count exceeds ``glp_subset_cap``.
    """
    mat = geometry.as_matrix(dictionary, "dictionary")
    n, m = mat.shape
    if hypergraph.m != m:
        raise ValueError("hypergraph vertices must index dictionary columns")
    if codes.m != m:
        raise ValueError("codes live in the wrong ambient dimension")
    if hypergraph.k is None:
        raise HypothesisError("hypergraph must be uniform")
    k = hypergraph.k

    r = regularity(hypergraph)
    sip_ok = has_sip(hypergraph)
    smax = float(np.linalg.svd(mat, compute_uv=False)[0])

    l2 = geometry.lower_bound_k(mat, min(2, m))
    l2k = geometry.lower_bound_k(mat, min(2 * k, m))
    l2h = geometry.restricted_lower_bound(mat, pairwise_unions(hypergraph))
    lower_bound_ok = l2h > rank_tol * smax
    spark_ok = geometry.spark_condition(mat, k, rank_tol)

    index_sets = support_index_sets(codes, hypergraph)
    support_counts = {edge: len(ids) for edge, ids in index_sets.items()}
    required = (k - 1) * math.comb(m, k) + 1
    counts_ok = all(count >= required for count in support_counts.values())
    glp_ok = True
    for edge in hypergraph.edges:
        ids = index_sets[edge]
        if len(ids) < k or not general_linear_position(
                codes.codes[:, ids], k, rank_tol,
                subset_cap=glp_subset_cap, samples=glp_samples,
                rng=np.random.default_rng(len(ids))):
            glp_ok = False
            break

    c2 = c1 = None
    try:
        c2 = compute_C2(mat, hypergraph, rank_tol)
        c1 = compute_C1(mat, codes, hypergraph, rank_tol)
    except HypothesisError:
        pass

    eps_dict = l2 / c1 if c1 else None
    eps_codes = l2k / c1 if (c1 and spark_ok) else None
    max_l1 = float(np.max(codes.l1_norms())) if codes.n_codes else 0.0

    return StabilityCertificate(
        m=m, n=n, k=k, m_bar=m_bar, r=r,
        L2=l2, L2k=l2k, L2H=l2h,
        C2=c2, C1=c1,
        eps_max_dictionary=eps_dict,
        eps_max_codes=eps_codes,
        max_code_l1=max_l1,
        support_counts=support_counts,
        required_per_support=required,
        sip_ok=sip_ok,
        regular_ok=r is not None,
        lower_bound_ok=lower_bound_ok,
        glp_ok=glp_ok,
        spark_ok=spark_ok,
        counts_ok=counts_ok,
    )
