"""Local-filtering bound: the C^max envelope, the filter that attains it,
the upper concave envelope used for protocol mixing, and a Monte Carlo
audit that random product-filter strategies never beat the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .entanglement import concurrence_wootters


@dataclass(frozen=True)
class FilterScenario:
    """Pure-state Schmidt weights plus the concurrence of the dephased input.

    lambda1 <= 1/2 <= lambda0, lambda0 + lambda1 = 1, and c_in can never
    exceed the pure-state concurrence 2 sqrt(lambda0 lambda1).
    """

    lambda0: float
    lambda1: float
    c_in: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lambda1 <= 0.5 + 1e-12 and 0.5 - 1e-12 <= self.lambda0 <= 1.0):
            raise ValueError(f"need 0 <= lambda1 <= 1/2 <= lambda0, got {self.lambda0}, {self.lambda1}")
        if abs(self.lambda0 + self.lambda1 - 1.0) > 1e-12:
            raise ValueError(f"Schmidt weights must sum to 1, got {self.lambda0 + self.lambda1}")
        cap = 2.0 * math.sqrt(self.lambda0 * self.lambda1)
        if self.c_in < -1e-12 or self.c_in > cap + 1e-12:
            raise ValueError(f"c_in={self.c_in} outside [0, 2 sqrt(l0 l1)] = [0, {cap}]")


@dataclass(frozen=True)
class CurvePoint:
    """One (success probability, value) sample of a performance curve."""

    p_s: float
    value: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 < self.p_s <= 1.0:
            raise ValueError(f"p_s must lie in (0, 1], got {self.p_s}")
        if not (math.isfinite(self.value) and self.value >= 0.0):
            raise ValueError(f"curve value must be finite and >= 0, got {self.value}")


def c_max(p_s: float, sc: FilterScenario) -> float:
    """Largest concurrence deliverable at success probability ``p_s``.

    Flat at c_in / (2 sqrt(l0 l1)) while p_s < 2 lambda1 (balanced filtering),
    then decays as sqrt((p_s - l1)/l0) c_in / p_s; continuous at the joint.
    """
    if not 0.0 < p_s <= 1.0:
        raise ValueError(f"p_s must lie in (0, 1], got {p_s}")
    if p_s < 2.0 * sc.lambda1:
        return sc.c_in / (2.0 * math.sqrt(sc.lambda0 * sc.lambda1))
    return sc.c_in * math.sqrt((p_s - sc.lambda1) / sc.lambda0) / p_s


def optimal_filter(p_s: float, sc: FilterScenario) -> tuple[float, float]:
    """Diagonal filter weights (w0, w1) on the Schmidt basis attaining c_max.

    Solves lambda0 w0^2 + lambda1 w1^2 = p_s with w0 w1 maximal: the stronger
    Schmidt branch is attenuated first (w1 = 1) until p_s drops below
    2 lambda1, after which both weights balance the branch probabilities
    (w_i = sqrt(p_s / (2 lambda_i)), each <= 1 exactly on that range).
    """
    if not 0.0 < p_s <= 1.0:
        raise ValueError(f"p_s must lie in (0, 1], got {p_s}")
    if p_s < 2.0 * sc.lambda1:
        return math.sqrt(p_s / (2.0 * sc.lambda0)), math.sqrt(p_s / (2.0 * sc.lambda1))
    if sc.lambda0 == 0.0:
        raise ValueError("degenerate scenario with lambda0 = 0")
    return math.sqrt((p_s - sc.lambda1) / sc.lambda0), 1.0


def upper_concave_envelope(points: Sequence[CurvePoint]) -> list[CurvePoint]:
    """Vertices of the upper concave envelope of the points (plus a virtual
    origin anchor, which is not emitted), sorted by p_s ascending.

    Duplicate p_s keep the maximal value (first occurrence wins ties);
    collinear interior points are dropped.
    """
    if not points:
        raise ValueError("envelope needs at least one point")
    best: dict[float, CurvePoint] = {}
    for pt in points:
        cur = best.get(pt.p_s)
        if cur is None or pt.value > cur.value:
            best[pt.p_s] = pt
    ordered = [best[k] for k in sorted(best)]

    # Andrew monotone chain, upper hull only, anchored at the origin.
    hull: list[tuple[float, float, CurvePoint | None]] = [(0.0, 0.0, None)]
    for pt in ordered:
        while len(hull) >= 2:
            x0, y0, _ = hull[-2]
            x1, y1, _ = hull[-1]
            cross = (x1 - x0) * (pt.value - y0) - (y1 - y0) * (pt.p_s - x0)
            if cross >= 0.0:  # last point is on or below the chord: not a vertex
                hull.pop()
            else:
                break
        hull.append((pt.p_s, pt.value, pt))
    return [entry[2] for entry in hull if entry[2] is not None]


def envelope_value(envelope: Sequence[CurvePoint], p_s: float) -> float:
    """Piecewise-linear envelope through the origin, evaluated at ``p_s``."""
    xs = [0.0] + [pt.p_s for pt in envelope]
    ys = [0.0] + [pt.value for pt in envelope]
    if p_s <= xs[0]:
        return ys[0]
    if p_s >= xs[-1]:
        return ys[-1]
    return float(np.interp(p_s, xs, ys))


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a Monte Carlo filter audit."""

    trials: int
    evaluated: int
    max_violation: float
    worst_p_s: float
    worst_concurrence: float


def montecarlo_filter_audit(
    sc: FilterScenario,
    input_state: np.ndarray,
    trials: int,
    seed: int,
    p_floor: float = 1e-12,
) -> AuditReport:
    """Try random single-outcome product filters M x N against the bound.

    Each trial draws complex Gaussian 2x2 matrices rescaled by their operator
    norm (so M^dag M <= 1), applies them to ``input_state``, and records
    p_s * C_filtered - p_s * c_max(p_s). A positive max violation beyond
    numerical noise falsifies the bound. Deterministic for a given seed.
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    rho = linalg.as_matrix(input_state)

    c_rho = concurrence_wootters(rho)
    if abs(c_rho - sc.c_in) > 1e-10:
        raise ValueError(f"input concurrence {c_rho} inconsistent with scenario c_in {sc.c_in}")
    marg = linalg.partial_trace(rho, [2, 2], keep=[1])
    w = np.sort(np.linalg.eigvalsh(marg))[::-1]
    if abs(w[0] - sc.lambda0) > 1e-10 or abs(w[1] - sc.lambda1) > 1e-10:
        raise ValueError(f"input Schmidt weights {w} inconsistent with scenario")

    rng = np.random.default_rng(seed)
    max_violation = -math.inf
    worst = (math.nan, math.nan)
    evaluated = 0
    for _ in range(trials):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        n = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        m /= np.linalg.svd(m, compute_uv=False)[0]
        n /= np.linalg.svd(n, compute_uv=False)[0]
        k = np.kron(m, n)
        sigma = k @ rho @ k.conj().T
        p = float(sigma.trace().real)
        if p < p_floor:
            continue
        p = min(p, 1.0)
        c_f = concurrence_wootters(sigma / p)
        violation = p * c_f - p * c_max(p, sc)
        evaluated += 1
        if violation > max_violation:
            max_violation = violation
            worst = (p, c_f)
    return AuditReport(
        trials=trials,
        evaluated=evaluated,
        max_violation=max_violation,
        worst_p_s=worst[0],
        worst_concurrence=worst[1],
    )
