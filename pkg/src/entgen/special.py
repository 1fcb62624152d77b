"""Scaled modified Bessel function needed by the success-probability formula.

The closed forms need products e^{-a} I0(b) with a >= b >= 0 where both
factors overflow/underflow separately, so everything is routed through the
scaled function i0e(x) = e^{-x} I0(x):

    e^{-a} I0(b) = exp(b - a) * i0e(b),   b - a <= 0.

i0e uses the defining power series up to x = 30 (largest term ~1e11, exact in
double) and the asymptotic expansion of e^{-x} I0(x) beyond, truncated at its
smallest term.
"""

from __future__ import annotations

import math

_SERIES_CUTOFF = 30.0


def i0(x: float) -> float:
    """Modified Bessel function I0 via its power series. Overflows for x >~ 700."""
    x = abs(float(x))
    q = x * x / 4.0
    term = 1.0
    total = 1.0
    for k in range(1, 1000):
        term *= q / (k * k)
        total += term
        if term < total * 1e-18 and k > x / 2.0:
            break
    return total


def i0e(x: float) -> float:
    """Scaled modified Bessel function e^{-|x|} I0(x)."""
    x = abs(float(x))
    if x <= _SERIES_CUTOFF:
        return math.exp(-x) * i0(x)
    # Asymptotic series Sum_k c_k / x^k with c_0 = 1, c_k = c_{k-1} (2k-1)^2 / (8k),
    # truncated where the terms bottom out (well below 1e-16 for x > 30).
    term = 1.0
    total = 1.0
    for k in range(1, 64):
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if nxt >= term:
            break
        term = nxt
        total += term
        if term < total * 1e-18:
            break
    return total / math.sqrt(2.0 * math.pi * x)


def exp_weighted_i0(a: float, b: float) -> float:
    """e^{-a} I0(b) for a >= b >= 0, computed without overflow."""
    a = float(a)
    b = abs(float(b))
    if b > a:
        raise ValueError(f"need a >= b >= 0 for a stable product, got a={a}, b={b}")
    return math.exp(b - a) * i0e(b)
