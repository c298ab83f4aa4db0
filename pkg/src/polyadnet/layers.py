"""Degree-layer index for weighted target sampling.

Attachment weight depends on a vertex only through its degree, so vertices
are grouped into layers (one per degree). Sampling a target is two-stage:
pick a layer with probability proportional to f(k) * |layer k|, then a
member uniformly inside it. Layer selection is a linear scan (a vectorized
cumulative sum over per-degree weights), which is fast because the number
of distinct degrees stays small compared to the number of vertices.
"""

from __future__ import annotations

import numpy as np

from .graph import MultiGraph
from .preference import PreferenceFunction

__all__ = ["LayerIndex", "SaturationError", "sample_target"]


class SaturationError(RuntimeError):
    """No vertex carries positive attachment weight.

    Raised when every current degree falls outside the preference window.
    ``stats`` is attached by ``grow`` when saturation interrupts a run.
    """

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class LayerIndex:
    """Per-degree vertex sets with incrementally maintained weights.

    The index and its graph must be mutated in lockstep; ``grow`` and the
    ``apply_*`` increment functions do that. ``verify`` rebuilds the index
    from the graph and checks both agree, for use as a debug invariant.
    """

    def __init__(self, f: PreferenceFunction, capacity: int = 256):
        self.f = f
        self._cap = capacity
        self._fw = f.weight_array(capacity - 1)
        self._count = np.zeros(capacity, dtype=np.int64)
        self._w = np.zeros(capacity)
        self._members: list[list[int] | None] = [None] * capacity
        self._pos: list[int] = []
        self._hi = 1  # scan bound: one past the highest degree ever seen

    @classmethod
    def build(cls, g: MultiGraph, f: PreferenceFunction) -> "LayerIndex":
        idx = cls(f, capacity=max(256, (max(g.degrees, default=0) + 1) * 2))
        for v, k in enumerate(g.degrees):
            idx.insert(v, k)
        return idx

    def _ensure(self, k: int) -> None:
        if k < self._cap:
            return
        new_cap = max(self._cap * 2, k + 1)
        self._fw = self.f.weight_array(new_cap - 1)
        count = np.zeros(new_cap, dtype=np.int64)
        count[: self._cap] = self._count
        self._count = count
        w = np.zeros(new_cap)
        w[: self._cap] = self._w
        self._w = w
        self._members.extend([None] * (new_cap - self._cap))
        self._cap = new_cap

    def insert(self, v: int, k: int) -> None:
        """Register vertex ``v`` at degree ``k``."""
        self._ensure(k)
        lst = self._members[k]
        if lst is None:
            lst = self._members[k] = []
        lst.append(v)
        if v >= len(self._pos):
            self._pos.extend([-1] * (v + 1 - len(self._pos)))
        self._pos[v] = len(lst) - 1
        self._count[k] += 1
        self._w[k] = self._fw[k] * self._count[k]
        if k + 1 > self._hi:
            self._hi = k + 1

    def bump(self, v: int, old_k: int, new_k: int) -> None:
        """Move vertex ``v`` from layer ``old_k`` to layer ``new_k``."""
        lst = self._members[old_k]
        i = self._pos[v]
        last = lst[-1]
        lst[i] = last
        self._pos[last] = i
        lst.pop()
        self._count[old_k] -= 1
        self._w[old_k] = self._fw[old_k] * self._count[old_k]
        self.insert(v, new_k)

    def sample_many(self, rng, count: int) -> list[int]:
        """Draw ``count`` targets against the current (frozen) weights.

        All draws see the same weight snapshot, so callers can implement
        increments whose attachments are simultaneous rather than
        sequential. Draw order is fixed: one uniform block selects layers,
        a second block selects members within layers.

        Raises SaturationError when the total weight is zero.
        """
        hi = self._hi
        cs = np.cumsum(self._w[:hi])
        total = cs[-1]
        if not total > 0.0:
            raise SaturationError(
                "no attachable vertex: every degree is outside the preference window"
            )
        layers = np.searchsorted(cs, rng.random(count) * total, side="right")
        picks = rng.random(count)
        out = []
        w = self._w
        members = self._members
        for li, u in zip(layers, picks):
            k = int(li)
            if k >= hi:
                k = hi - 1
            while w[k] <= 0.0:  # float-boundary guard, nearly never taken
                k -= 1
            lst = members[k]
            out.append(lst[int(u * len(lst))])
        return out

    @property
    def members(self) -> dict[int, list[int]]:
        """Copy of the populated layers, for inspection and tests."""
        return {
            k: list(lst)
            for k, lst in enumerate(self._members)
            if lst
        }

    @property
    def layer_weight(self) -> dict[int, float]:
        return {
            k: float(self._fw[k]) * len(lst)
            for k, lst in enumerate(self._members)
            if lst
        }

    @property
    def total_weight(self) -> float:
        """Recomputed exactly on demand."""
        return float(np.dot(self._fw[: self._hi], self._count[: self._hi]))

    def verify(self, g: MultiGraph) -> None:
        """Rebuild from the graph and compare; raises on any drift."""
        fresh = LayerIndex.build(g, self.f)
        mine = {k: sorted(lst) for k, lst in self.members.items()}
        theirs = {k: sorted(lst) for k, lst in fresh.members.items()}
        if mine != theirs:
            raise AssertionError("layer membership drifted from the graph")
        hi = max(self._hi, fresh._hi)
        a = np.zeros(hi)
        b = np.zeros(hi)
        a[: self._hi] = self._w[: self._hi]
        b[: fresh._hi] = fresh._w[: fresh._hi]
        if not np.array_equal(a, b):
            raise AssertionError("layer weights drifted from the graph")


def sample_target(idx: LayerIndex, rng) -> int:
    """One weighted target draw: vertex i with probability f(k_i)/sum f(k_j)."""
    return idx.sample_many(rng, 1)[0]
