"""Closed forms for the optimal performance bound over a lossy channel.

The chain is: preparation weights and pulse overlap reduce to a pure state
with Schmidt weights (1 +- sqrt(1 - x^2))/2 dephased by a phase flip
(virtual_reduction); maximizing the filtering envelope over the overlap
yields the achievable concurrence c_opt evaluated at the optimizer u_star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .entanglement import Monotone, damping_factor, monotone_value
from .filtering import CurvePoint, upper_concave_envelope

DEFAULT_ATTENUATION_KM = 25.0


@dataclass(frozen=True)
class ChannelSpec:
    """Pure-loss channel, parameterized by its transmittance T in (0, 1]."""

    transmittance: float

    def __post_init__(self) -> None:
        if not 0.0 < self.transmittance <= 1.0:
            raise ValueError(f"transmittance must lie in (0, 1], got {self.transmittance}")

    @classmethod
    def from_fiber(cls, length_km: float, l0_km: float = DEFAULT_ATTENUATION_KM) -> "ChannelSpec":
        """T = exp(-l / l0) for fiber length l and attenuation length l0."""
        if length_km < 0.0:
            raise ValueError(f"fiber length must be >= 0, got {length_km}")
        if l0_km <= 0.0:
            raise ValueError(f"attenuation length must be > 0, got {l0_km}")
        return cls(math.exp(-length_km / l0_km))

    def damping(self, u: float) -> float:
        """Coherence survival u^{(1-T)/T} through this channel."""
        return damping_factor(u, self.transmittance)


@dataclass(frozen=True)
class VirtualReduction:
    """Parameters of the dephased-pure-state picture of one transmission."""

    x: float
    lambda_plus: float
    lambda_minus: float
    f_u: float
    c_in: float


def virtual_reduction(q0: float, overlap: float, ch: ChannelSpec) -> VirtualReduction:
    """Reduce a preparation (weights q0/q1, pulse overlap) to the dephased picture.

    x = 2 sqrt(q0 q1 (1 - overlap^2)) is the pure-state concurrence before
    dephasing, lambda_+- its Schmidt weights, f_u the phase-flip weight, and
    c_in = overlap^{(1-T)/T} x the concurrence actually delivered.
    """
    if not 0.0 <= q0 <= 1.0:
        raise ValueError(f"q0 must lie in [0, 1], got {q0}")
    if not 0.0 <= overlap <= 1.0:
        raise ValueError(f"overlap must lie in [0, 1], got {overlap}")
    x = 2.0 * math.sqrt(q0 * (1.0 - q0) * (1.0 - overlap * overlap))
    root = math.sqrt(max(1.0 - x * x, 0.0))
    f_u = (1.0 + ch.damping(overlap)) / 2.0
    return VirtualReduction(
        x=x,
        lambda_plus=(1.0 + root) / 2.0,
        lambda_minus=(1.0 - root) / 2.0,
        f_u=f_u,
        c_in=ch.damping(overlap) * x,
    )


def u_star(p_s: float, ch: ChannelSpec) -> float:
    """Overlap that maximizes the achievable concurrence at fixed p_s."""
    if not 0.0 < p_s <= 1.0:
        raise ValueError(f"p_s must lie in (0, 1], got {p_s}")
    t = ch.transmittance
    val = 0.5 * (
        (1.0 - p_s) * (2.0 - t)
        + math.sqrt(4.0 * p_s * p_s * (1.0 - t) + (1.0 - p_s) ** 2 * t * t)
    )
    if not (1.0 - p_s) - 1e-12 <= val <= 1.0 + 1e-12:
        raise ValueError(f"u_star={val} escaped its range [1-p_s, 1] at p_s={p_s}, T={t}")
    return min(max(val, 1.0 - p_s), 1.0)


def c_opt(u: float, p_s: float, ch: ChannelSpec) -> float:
    """Achievable concurrence u^{(1-T)/T} sqrt((1-u)(2 p_s + u - 1)) / p_s."""
    if not 0.0 < p_s <= 1.0:
        raise ValueError(f"p_s must lie in (0, 1], got {p_s}")
    if u < (1.0 - p_s) - 1e-12 or u > 1.0 + 1e-12:
        raise ValueError(f"u={u} outside the feasible range [1-p_s, 1] = [{1.0 - p_s}, 1]")
    u = min(max(u, 0.0), 1.0)
    radicand = max((1.0 - u) * (2.0 * p_s + u - 1.0), 0.0)
    return ch.damping(u) * math.sqrt(radicand) / p_s


def optimal_bound_curve(
    ch: ChannelSpec, grid: Sequence[float], mono: Monotone
) -> list[CurvePoint]:
    """Curve (i): points (p_s, p_s E(c_opt(u_star, p_s))), envelope-processed."""
    if len(grid) == 0:
        raise ValueError("grid must not be empty")
    points = []
    for p_s in grid:
        if not 0.0 < p_s <= 1.0:
            raise ValueError(f"grid value {p_s} outside (0, 1]")
        us = u_star(p_s, ch)
        c = c_opt(us, p_s, ch)
        e_bar = monotone_value(mono, c)
        meta = {
            "curve": "(i)-optimal-bound",
            "T": ch.transmittance,
            "monotone": mono.name,
            "u_star": us,
            "concurrence": c,
            "e_bar": e_bar,
        }
        if p_s == 1.0:
            meta["note"] = "unreachable by the optical protocols"
        points.append(CurvePoint(p_s=p_s, value=p_s * e_bar, meta=meta))
    return upper_concave_envelope(points)
