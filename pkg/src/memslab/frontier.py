"""The tangle vs. mixedness plane: analytic curves, envelope, certification.

The boundary family mems(gamma) traces the maximum tangle attainable at each
linear entropy: tau = gamma^2 with

    S_L(gamma) = (2/3) [4 g (2 - 3 g) - gamma^2],   g = mems_population(gamma).

Both branches of g make S_L a quadratic in gamma, so the envelope is inverted
in closed form (branch switch at S_L = 16/27).  certify() checks that no
sampled state exceeds the envelope; scan() records per-bin maxima for plots.
hill_climb() is a stochastic probe: under the linear-entropy metric it
cannot beat the envelope, while at fixed von Neumann entropy it does find
states above the family, which is exactly the sense in which the family is
tied to Tr[rho^2]-based mixedness.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .linalg import psd_sqrt
from .measures import linear_entropy_of_mat, tangle_of_mat, von_neumann_entropy
from .sampling import EnsembleSpec, map_chunks, wishart
from .states import DensityMatrix, OutOfRange, digest, make_density, mems_population, werner

LN4 = math.log(4.0)

S_BRANCH = 16.0 / 27.0  # linear entropy at the gamma = 2/3 branch point
S_EDGE = 8.0 / 9.0      # largest linear entropy the boundary family reaches


class UnsupportedMetric(ValueError):
    """No analytic envelope exists for this mixedness metric."""


class MixednessMetric(enum.Enum):
    LINEAR = "linear"
    VON_NEUMANN_NORMALIZED = "vn"


def mems_linear_entropy(gamma: float) -> float:
    g = mems_population(gamma)
    return (2.0 / 3.0) * (4.0 * g * (2.0 - 3.0 * g) - gamma * gamma)


def mems_curve(n: int) -> list[tuple[float, float, float]]:
    """n closed-form (gamma, tangle, linear_entropy) points, gamma uniform on [0, 1]."""
    if n < 2:
        raise OutOfRange(f"need at least 2 curve points, got {n}")
    points = []
    for i in range(n):
        gamma = i / (n - 1)
        points.append((gamma, gamma * gamma, mems_linear_entropy(gamma)))
    return points


def werner_curve(n: int) -> list[tuple[float, float, float]]:
    """n measured (gamma, tangle, linear_entropy) points for the Werner family.

    Points are produced by constructing each state and measuring it, so this
    doubles as an end-to-end check of the measure pipeline.
    """
    if n < 2:
        raise OutOfRange(f"need at least 2 curve points, got {n}")
    points = []
    for i in range(n):
        gamma = i / (n - 1)
        mat = werner(gamma).mat
        points.append((gamma, tangle_of_mat(mat), linear_entropy_of_mat(mat)))
    return points


def envelope_tangle(metric: MixednessMetric, s: float) -> float:
    """Maximum tangle at mixedness ``s`` under the linear-entropy metric.

    Inverts S_L(gamma) on the correct branch: for s <= 16/27 the branch with
    g = gamma/2, for 16/27 < s <= 8/9 the frozen-population branch (where the
    relation is affine), and 0 beyond 8/9 where the family ends.
    """
    if metric is not MixednessMetric.LINEAR:
        raise UnsupportedMetric("analytic envelope is only available for the linear-entropy metric")
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"mixedness {s} outside [0, 1]")
    if s > S_EDGE:
        return 0.0
    if s > S_BRANCH:
        # S_L = 8/9 - (2/3) gamma^2  =>  tau = gamma^2 = 4/3 - (3/2) S_L
        return 4.0 / 3.0 - 1.5 * s
    # S_L = (8/3) gamma (1 - gamma)  =>  gamma on the upper root
    gamma = 0.5 * (1.0 + math.sqrt(max(1.0 - 1.5 * s, 0.0)))
    return gamma * gamma


@dataclass(frozen=True)
class BinStat:
    """Occupied mixedness bin with its running tangle maximum."""

    lo: float
    hi: float
    max_tangle: float
    witness_digest: str
    count: int


@dataclass(frozen=True)
class FrontierEnvelope:
    metric: MixednessMetric
    bin_count: int
    bins: tuple[BinStat, ...]  # occupied bins only, ascending
    samples_total: int


@dataclass(frozen=True, eq=False)
class CertificationReport:
    """Outcome of an envelope-violation search.

    max_violation is the largest tau - envelope(S_L) over the ensemble
    (signed; positive would mean a sample beat the envelope).  The verdict
    is PASS exactly when max_violation <= tolerance.
    """

    max_violation: float
    violating_state: Optional[DensityMatrix]
    samples_total: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _metric_value(metric: MixednessMetric, mat: np.ndarray) -> float:
    if metric is MixednessMetric.LINEAR:
        return linear_entropy_of_mat(mat)
    return von_neumann_entropy(DensityMatrix(mat)) / LN4


def _clip01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def scan(spec: EnsembleSpec, metric: MixednessMetric, bins: int) -> FrontierEnvelope:
    """Per-bin tangle maxima over the ensemble; deterministic given spec."""
    if bins < 10:
        raise OutOfRange(f"need at least 10 bins, got {bins}")

    def chunk_stats(states):
        # partial reduce: bin index -> (max tangle, witness digest, count)
        partial: dict[int, tuple[float, str, int]] = {}
        for state in states:
            tau = tangle_of_mat(state.mat)
            idx = min(int(_clip01(_metric_value(metric, state.mat)) * bins), bins - 1)
            prev = partial.get(idx)
            if prev is None:
                partial[idx] = (tau, digest(state), 1)
            elif tau > prev[0]:
                partial[idx] = (tau, digest(state), prev[2] + 1)
            else:
                partial[idx] = (prev[0], prev[1], prev[2] + 1)
        return partial

    merged: dict[int, tuple[float, str, int]] = {}
    for partial in map_chunks(spec, chunk_stats):
        for idx, (tau, wit, cnt) in partial.items():
            prev = merged.get(idx)
            if prev is None:
                merged[idx] = (tau, wit, cnt)
            elif tau > prev[0]:
                merged[idx] = (tau, wit, prev[2] + cnt)
            else:
                merged[idx] = (prev[0], prev[1], prev[2] + cnt)

    stats = tuple(
        BinStat(lo=idx / bins, hi=(idx + 1) / bins, max_tangle=merged[idx][0],
                witness_digest=merged[idx][1], count=merged[idx][2])
        for idx in sorted(merged)
    )
    return FrontierEnvelope(metric=metric, bin_count=bins, bins=stats, samples_total=spec.count)


def certify_states(states: Iterable[DensityMatrix], tolerance: float) -> CertificationReport:
    """Envelope-violation search over an explicit collection of states."""
    if tolerance <= 0.0:
        raise OutOfRange(f"tolerance {tolerance} must be positive")
    worst = -math.inf
    witness = None
    total = 0
    for state in states:
        total += 1
        violation = tangle_of_mat(state.mat) - envelope_tangle(
            MixednessMetric.LINEAR, _clip01(linear_entropy_of_mat(state.mat))
        )
        if violation > worst:
            worst = violation
            witness = state
    if total == 0:
        raise OutOfRange("cannot certify an empty collection of states")
    return CertificationReport(max_violation=worst, violating_state=witness,
                               samples_total=total, tolerance=tolerance)


def certify(spec: EnsembleSpec, tolerance: float) -> CertificationReport:
    """Envelope-violation search over a sampled ensemble (linear metric)."""
    if tolerance <= 0.0:
        raise OutOfRange(f"tolerance {tolerance} must be positive")

    def chunk_worst(states):
        worst = -math.inf
        witness = None
        for state in states:
            violation = tangle_of_mat(state.mat) - envelope_tangle(
                MixednessMetric.LINEAR, _clip01(linear_entropy_of_mat(state.mat))
            )
            if violation > worst:
                worst = violation
                witness = state
        return worst, witness

    worst, witness = -math.inf, None
    for chunk_violation, chunk_witness in map_chunks(spec, chunk_worst):
        if chunk_violation > worst:
            worst, witness = chunk_violation, chunk_witness
    return CertificationReport(max_violation=worst, violating_state=witness,
                               samples_total=spec.count, tolerance=tolerance)


def hill_climb(
    start: DensityMatrix,
    metric: MixednessMetric,
    steps: int,
    rng: np.random.Generator,
    band: float = 1e-3,
    eps_hi: float = 0.1,
    eps_lo: float = 1e-4,
) -> DensityMatrix:
    """Greedy stochastic tangle ascent at (nearly) fixed mixedness.

    Proposals are convex mixes (1 - w) rho + w sigma with w drawn from a
    geometrically shrinking scale eps_hi -> eps_lo.  sigma alternates between
    plain Ginibre draws of random rank and support-weighted draws
    sqrt(rho) W sqrt(rho) / Tr; the latter respect the current support, which
    is what makes ascent from rank-deficient starts possible at all (mixing
    toward generic full-rank noise can only dilute the concurrence).  A move
    is accepted when the tangle strictly increases and the chosen mixedness
    stays within +-band of the start's value.
    """
    if steps < 1:
        raise OutOfRange(f"need at least 1 step, got {steps}")
    anchor = _metric_value(metric, start.mat)
    current = start.mat
    current_tangle = tangle_of_mat(current)
    root = psd_sqrt(current)
    ratio = (eps_lo / eps_hi) ** (1.0 / max(steps - 1, 1))
    eps = eps_hi
    for _ in range(steps):
        rank = int(rng.integers(1, 5))
        w = eps * (1.0 - rng.random())
        wish = wishart(rng, rank)
        support_weighted = rng.random() < 0.5
        eps *= ratio
        if support_weighted:
            wish = root @ wish @ root
        tr = float(np.trace(wish).real)
        if tr <= 0.0:
            continue
        candidate = (1.0 - w) * current + (w / tr) * wish
        cand_tangle = tangle_of_mat(candidate)
        if cand_tangle > current_tangle and abs(_metric_value(metric, candidate) - anchor) <= band:
            current = candidate
            current_tangle = cand_tangle
            root = psd_sqrt(current)
    return make_density(current)
