"""Model parameters and per-step rate formulas.

One growth step adds, with probability ``gamma``, a polyad (a clique of
``n`` new vertices whose per-vertex free-edge counts follow ``rn``), and
otherwise a monad (one new vertex with a free-edge count from ``r1``).
``mu`` of each polyad vertex's free ends are grouped into conjugate
bundles, one bundle per index, all ends of a bundle landing on a single
sampled target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import DegreeDistribution

__all__ = [
    "ModelParams",
    "validate_params",
    "expected_vertices_per_step",
    "expected_edges_per_step",
]


@dataclass(frozen=True)
class ModelParams:
    gamma: float
    n: int
    mu: int
    r1: DegreeDistribution
    rn: DegreeDistribution


def validate_params(p: ModelParams) -> ModelParams:
    """Check every model constraint; return ``p`` unchanged when valid.

    Raises ValueError describing the first violated constraint.
    """
    if not 0.0 <= p.gamma <= 1.0:
        raise ValueError(f"gamma={p.gamma} outside [0, 1]")
    if not isinstance(p.n, int) or p.n < 2:
        raise ValueError(f"polyad size n={p.n!r} must be an integer >= 2")
    if not isinstance(p.mu, int) or p.mu < 0:
        raise ValueError(f"bundle count mu={p.mu!r} must be an integer >= 0")
    if not isinstance(p.r1, DegreeDistribution) or not isinstance(p.rn, DegreeDistribution):
        raise ValueError("r1 and rn must be DegreeDistribution instances")
    if p.rn.support_min < p.mu:
        raise ValueError(
            f"rn support starts at {p.rn.support_min}, below mu={p.mu}; every "
            "polyad vertex must own at least mu free ends"
        )
    return p


def expected_vertices_per_step(p: ModelParams) -> float:
    """Mean vertices added per step: 1 + (n-1)*gamma."""
    return 1.0 + (p.n - 1) * p.gamma


def expected_edges_per_step(p: ModelParams) -> float:
    """Mean edges added per step.

    A polyad contributes its n(n-1)/2 clique edges plus n * mean(rn) free
    edges; a monad contributes mean(r1) free edges.
    """
    n = p.n
    nad_edges = n * p.rn.mean_degree + n * (n - 1) / 2.0
    return p.gamma * nad_edges + (1.0 - p.gamma) * p.r1.mean_degree
