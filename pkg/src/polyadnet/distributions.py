"""Sparse probability distributions over integer degrees.

Increment-size tables and vertex degree distributions (VDDs) share one
representation: a map from a non-negative integer degree to a probability.
Gaps inside the support are allowed and read as zero.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Mapping

__all__ = [
    "DegreeDistribution",
    "mean_degree_of",
    "read_distribution",
    "write_distribution",
]

#: Default tolerance on |sum(probs) - 1| at construction time.
NORMALIZATION_TOL = 1e-9

#: Text tables off by more than this are rejected; smaller deviations are
#: renormalized on load.
TEXT_RENORM_TOL = 1e-6


@dataclass(frozen=True)
class DegreeDistribution:
    """Probability table over integer degrees.

    ``probs`` maps degree to probability. Entries that are exactly zero are
    dropped at construction, so ``support_min`` and ``support_max`` are the
    smallest and largest degree that carry mass. Instances are immutable;
    build them through :meth:`from_probs` or :meth:`from_counts`.
    """

    probs: dict[int, float]
    support_min: int
    support_max: int

    @classmethod
    def from_probs(
        cls,
        probs: Mapping[int, float],
        norm_tol: float = NORMALIZATION_TOL,
    ) -> "DegreeDistribution":
        """Validate a degree -> probability mapping and build a distribution.

        Args:
            probs: mapping from non-negative integer degree to probability.
            norm_tol: allowed deviation of the total mass from 1. Solver
                output truncated at a finite degree legitimately sums to
                slightly less than 1, so callers may widen this.

        Raises:
            ValueError: on negative degrees, negative probabilities, an empty
                table, or total mass off by more than ``norm_tol``.
        """
        clean: dict[int, float] = {}
        for k, p in probs.items():
            if isinstance(k, bool) or not isinstance(k, int):
                raise ValueError(f"degree {k!r} is not an integer")
            if k < 0:
                raise ValueError(f"degree {k} is negative")
            p = float(p)
            if p < 0.0:
                raise ValueError(f"probability {p} at degree {k} is negative")
            if math.isnan(p):
                raise ValueError(f"probability at degree {k} is NaN")
            if p > 0.0:
                clean[k] = p
        if not clean:
            raise ValueError("distribution has no positive-probability entries")
        total = math.fsum(clean.values())
        if abs(total - 1.0) > norm_tol:
            raise ValueError(
                f"probabilities sum to {total!r}, off by more than {norm_tol}"
            )
        return cls(
            probs=dict(sorted(clean.items())),
            support_min=min(clean),
            support_max=max(clean),
        )

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "DegreeDistribution":
        """Build the empirical distribution of integer counts.

        Args:
            counts: mapping from degree to a non-negative occurrence count.
        """
        total = sum(counts.values())
        if total <= 0:
            raise ValueError("counts are empty")
        return cls.from_probs({k: c / total for k, c in counts.items() if c})

    def prob(self, k: int) -> float:
        """Probability at degree ``k`` (zero off the table)."""
        return self.probs.get(k, 0.0)

    @cached_property
    def mean_degree(self) -> float:
        return math.fsum(k * p for k, p in self.probs.items())

    @cached_property
    def total_mass(self) -> float:
        return math.fsum(self.probs.values())

    @cached_property
    def _sampling_table(self) -> tuple[list[int], list[float]]:
        """Sorted support values and their cumulative probabilities."""
        vals = sorted(self.probs)
        cum: list[float] = []
        acc = 0.0
        for k in vals:
            acc += self.probs[k]
            cum.append(acc)
        return vals, cum

    def sample(self, rng) -> int:
        """Draw one value; ``rng`` is a numpy Generator (or anything with
        ``random()``)."""
        vals, cum = self._sampling_table
        if len(vals) == 1:
            return vals[0]
        i = bisect_right(cum, rng.random() * cum[-1])
        return vals[min(i, len(vals) - 1)]

    def items(self):
        return self.probs.items()


def mean_degree_of(d: DegreeDistribution) -> float:
    """Mean of a degree distribution, sum of k * probability."""
    return d.mean_degree


def write_distribution(d: DegreeDistribution, path, header: Mapping | None = None) -> None:
    """Write ``k<TAB>probability`` lines, one per supported degree.

    Header entries become leading ``# key=value`` comment lines.
    """
    lines = []
    for key, val in (header or {}).items():
        lines.append(f"# {key}={val}")
    for k in sorted(d.probs):
        lines.append(f"{k}\t{d.probs[k]!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_table(path) -> tuple[dict[int, float], dict[str, str]]:
    """Shared parser for degree/value text tables.

    Returns the value table and any ``# key=value`` header entries.
    """
    table: dict[int, float] = {}
    header: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                header.setdefault(key.strip(), val.strip())
            continue
        if "#" in line:
            line = line[: line.index("#")].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'k<TAB>value', got {raw!r}")
        try:
            k = int(parts[0])
            v = float(parts[1])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
        if k in table:
            raise ValueError(f"{path}:{lineno}: duplicate degree {k}")
        table[k] = v
    if not table:
        raise ValueError(f"{path}: no data lines")
    return table, header


def read_distribution(path) -> DegreeDistribution:
    """Load a distribution from ``k<TAB>value`` text.

    Tables whose mass is within ``TEXT_RENORM_TOL`` of 1 are renormalized;
    anything further off is rejected. Exactly normalized tables are stored
    as written.
    """
    table, _ = _parse_table(path)
    total = math.fsum(table.values())
    if abs(total - 1.0) > TEXT_RENORM_TOL:
        raise ValueError(
            f"{path}: probabilities sum to {total!r}, beyond the "
            f"{TEXT_RENORM_TOL} renormalization limit"
        )
    if total != 1.0:
        table = {k: v / total for k, v in table.items()}
    return DegreeDistribution.from_probs(table)
