"""Recover the preference function from a target degree distribution.

Solving the stationary recurrence for f instead of Q turns the forward
sweep around: with the scale convention <f> = a (the mean number of edge
ends landing on old vertices per step), each window degree gets

    f(k) = arr_k / Q_k - (1 + gamma (n-1))
           + [b f(k-1) Q_{k-1} + gamma mu f(k-n) Q_{k-n}] / (a Q_k)

where arr_k is the arrival mass at degree k and b = a - gamma mu is the
single-end rate. Degrees below the window contribute nothing because f
vanishes there, so the sweep is explicit.

Any positive rescaling of f leaves the model unchanged, so the <f> = a
convention is just a normalization pick. Not every distribution is
reachable by the model. When the sweep forces f(k) <= 0 the target is
infeasible for these increment parameters; the result then carries the
first offending degree and the raw weights for inspection instead of a
preference function.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import DegreeDistribution
from .params import ModelParams, validate_params
from .preference import PreferenceFunction

__all__ = ["CalibrationResult", "calibrate", "normalizer_a"]


def normalizer_a(p: ModelParams) -> float:
    """Mean edge ends attaching to old vertices per step.

    Monads contribute their mean free-edge count, polyad vertices their
    free ends, but a conjugate bundle spends n ends on one target, so mu
    bundles per polyad count once each rather than n times.
    """
    m1 = p.r1.mean_degree
    mn = p.rn.mean_degree
    return (1.0 - p.gamma) * m1 + p.gamma * (p.n * mn - (p.n - 1) * p.mu)


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of one calibration sweep.

    f is None when the target is infeasible; raw_weights always holds the
    swept values (useful to see how badly and where positivity fails).
    """

    f: PreferenceFunction | None
    a: float
    feasible: bool
    first_infeasible_k: int | None
    raw_weights: dict[int, float]


def calibrate(
    q_target: DegreeDistribution,
    p: ModelParams,
    window: tuple[int, int] | None = None,
) -> CalibrationResult:
    """Sweep out the preference weights hitting q_target, if any exist.

    The window defaults to the target's support range. Window degrees
    must carry positive target mass (a zero inside the window would need
    infinite preference on its neighbours to stay empty).

    Args:
        q_target: distribution the stationary model should reproduce.
        p: increment parameters (gamma, n, mu, r1, rn).
        window: inclusive (g, M) degree range to recover f on.

    Raises:
        ValueError: window degrees without target mass, a window outside
            the target support, or a model that attaches no edge ends.
    """
    validate_params(p)
    if window is None:
        window = (q_target.support_min, q_target.support_max)
    g, m_top = window
    if g > m_top:
        raise ValueError(f"empty window ({g}, {m_top})")
    if g < 0:
        raise ValueError(f"window start {g} must be >= 0")

    a = normalizer_a(p)
    if a <= 0.0:
        raise ValueError(
            "no edge ends attach to old vertices per step; "
            "the preference function is unidentifiable"
        )
    gamma, n, mu = p.gamma, p.n, p.mu
    b = a - gamma * mu
    dilution = 1.0 + gamma * (n - 1.0)

    def arrival(k: int) -> float:
        return (1.0 - gamma) * p.r1.prob(k) + gamma * n * p.rn.prob(k - n + 1)

    weights: dict[int, float] = {}
    t: dict[int, float] = {}

    def t_at(j: int) -> float:
        if j < g:
            return 0.0
        return t.get(j, 0.0)

    feasible = True
    first_bad = None
    for k in range(g, m_top + 1):
        qk = q_target.prob(k)
        if qk <= 0.0:
            raise ValueError(
                f"target has no mass at degree {k} inside the window; "
                "calibration needs positive probability on every window degree"
            )
        num = arrival(k) * a - dilution * a * qk
        num += b * t_at(k - 1) + gamma * mu * t_at(k - n)
        fk = num / (a * qk)
        weights[k] = fk
        t[k] = fk * qk
        if feasible and fk <= 0.0:
            feasible = False
            first_bad = k

    f = PreferenceFunction.from_table(weights) if feasible else None
    return CalibrationResult(
        f=f,
        a=a,
        feasible=feasible,
        first_infeasible_k=first_bad,
        raw_weights=weights,
    )
