import math

import numpy as np
import pytest

from entgen.bound import ChannelSpec, c_opt, optimal_bound_curve, u_star, virtual_reduction
from entgen.entanglement import CONCURRENCE, EOF_MONOTONE
from entgen.filtering import FilterScenario, c_max

# Frozen with mpmath: sqrt(1 - e^-2), e^-1 * sqrt(1 - e^-2), (1 + e^-1)/2.
X_AT_INV_E = 0.9298734950321938
C_IN_AT_INV_E = 0.3420813417125794
F_AT_INV_E = 0.6839397205857212
# Frozen: 0.75 * sqrt(0.25 * 0.75) / 0.5.
C_OPT_HALF_HALF = 0.649519052838329


def test_channel_validation():
    with pytest.raises(ValueError, match="transmittance"):
        ChannelSpec(0.0)
    with pytest.raises(ValueError, match="transmittance"):
        ChannelSpec(1.2)
    assert ChannelSpec.from_fiber(0.0).transmittance == 1.0
    assert ChannelSpec.from_fiber(25.0).transmittance == pytest.approx(math.exp(-1.0))
    assert ChannelSpec.from_fiber(10.0, l0_km=5.0).transmittance == pytest.approx(math.exp(-2.0))
    with pytest.raises(ValueError, match="attenuation"):
        ChannelSpec.from_fiber(10.0, l0_km=0.0)


def test_virtual_reduction_orthogonal_pulses():
    red = virtual_reduction(0.5, 0.0, ChannelSpec(0.5))
    assert red.x == pytest.approx(1.0)
    assert red.lambda_plus == pytest.approx(0.5)
    assert red.lambda_minus == pytest.approx(0.5)
    assert red.f_u == pytest.approx(0.5)
    assert red.c_in == 0.0


def test_virtual_reduction_inverse_e_overlap():
    red = virtual_reduction(0.5, math.exp(-1.0), ChannelSpec(0.5))
    assert red.x == pytest.approx(X_AT_INV_E, abs=1e-15)
    assert red.lambda_plus == pytest.approx((1 + math.exp(-1)) / 2, abs=1e-15)
    assert red.lambda_minus == pytest.approx((1 - math.exp(-1)) / 2, abs=1e-15)
    assert red.f_u == pytest.approx(F_AT_INV_E, abs=1e-15)
    assert red.c_in == pytest.approx(C_IN_AT_INV_E, abs=1e-15)


def test_virtual_reduction_unentangled():
    red = virtual_reduction(0.0, 0.3, ChannelSpec(0.9))
    assert red.x == 0.0
    assert red.c_in == 0.0
    with pytest.raises(ValueError, match="q0"):
        virtual_reduction(1.5, 0.3, ChannelSpec(0.9))
    with pytest.raises(ValueError, match="overlap"):
        virtual_reduction(0.5, 1.3, ChannelSpec(0.9))


def test_u_star_examples():
    assert u_star(0.5, ChannelSpec(0.5)) == pytest.approx(0.75, abs=1e-15)
    for ps in np.linspace(0.05, 0.95, 10):
        assert u_star(ps, ChannelSpec(1.0)) == pytest.approx(1.0 - ps, abs=1e-14)
    assert u_star(1.0, ChannelSpec(0.75)) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(ValueError, match="p_s"):
        u_star(0.0, ChannelSpec(0.5))


def test_u_star_in_range_on_grid():
    for t in np.linspace(0.01, 1.0, 100):
        ch = ChannelSpec(t)
        for ps in np.linspace(0.01, 1.0, 100):
            us = u_star(ps, ch)
            assert 1.0 - ps - 1e-12 <= us <= 1.0 + 1e-12


def test_c_opt_examples():
    ch1 = ChannelSpec(1.0)
    for ps in np.linspace(0.05, 0.95, 10):
        assert c_opt(1.0 - ps, ps, ch1) == pytest.approx(1.0, abs=1e-13)
    assert c_opt(0.75, 0.5, ChannelSpec(0.5)) == pytest.approx(C_OPT_HALF_HALF, abs=1e-15)
    assert c_opt(1.0, 0.5, ChannelSpec(0.3)) == 0.0
    with pytest.raises(ValueError, match="feasible range"):
        c_opt(0.3, 0.5, ChannelSpec(0.5))


def test_u_star_maximizes_c_opt(rng):
    for t in (0.2, 0.5, 0.8):
        ch = ChannelSpec(t)
        for ps in (0.1, 0.4, 0.7, 0.95):
            best = c_opt(u_star(ps, ch), ps, ch)
            lo = 1.0 - ps
            for u in lo + (1.0 - lo) * rng.uniform(0, 1, 200):
                assert c_opt(u, ps, ch) <= best + 1e-12


def test_c_opt_nondecreasing_in_transmittance():
    for ps in (0.1, 0.5, 0.9):
        vals = [
            c_opt(u_star(ps, ChannelSpec(t)), ps, ChannelSpec(t))
            for t in np.linspace(0.02, 1.0, 80)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_bound_matches_composed_filter_envelope():
    # The closed form is exactly max over the pulse overlap of the filtering
    # envelope in the balanced-preparation scenario.
    def composed(ps: float, ch: ChannelSpec, overlap: float) -> float:
        red = virtual_reduction(0.5, overlap, ch)
        sc = FilterScenario(lambda0=red.lambda_plus, lambda1=red.lambda_minus, c_in=red.c_in)
        return c_max(ps, sc)

    for t in (0.25, 0.5, 0.8):
        ch = ChannelSpec(t)
        for ps in (0.05, 0.3, 0.55, 0.8, 0.95):
            grid = np.linspace(1e-9, 1.0 - 1e-12, 1001)
            vals = [composed(ps, ch, o) for o in grid]
            k = int(np.argmax(vals))
            lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
            golden = (math.sqrt(5.0) - 1.0) / 2.0
            a, b = lo, hi
            c = b - golden * (b - a)
            d = a + golden * (b - a)
            fc, fd = composed(ps, ch, c), composed(ps, ch, d)
            for _ in range(120):
                if fc >= fd:
                    b, d, fd = d, c, fc
                    c = b - golden * (b - a)
                    fc = composed(ps, ch, c)
                else:
                    a, c, fc = c, d, fd
                    d = a + golden * (b - a)
                    fd = composed(ps, ch, d)
            best = max(max(vals), fc, fd)
            assert best == pytest.approx(c_opt(u_star(ps, ch), ps, ch), abs=1e-10)


def test_optimal_bound_curve_lossless_line():
    pts = optimal_bound_curve(ChannelSpec(1.0), [0.2, 0.4, 0.6, 0.8], CONCURRENCE)
    # Exactly collinear through the origin: only the far vertex survives.
    assert [(p.p_s, p.value) for p in pts] == [(0.8, 0.8)]
    assert pts[0].meta["e_bar"] == pytest.approx(1.0, abs=1e-13)


def test_optimal_bound_curve_metadata_and_value():
    pts = optimal_bound_curve(ChannelSpec(0.5), [0.25, 0.5, 0.75], CONCURRENCE)
    assert len(pts) == 3
    mid = [p for p in pts if p.p_s == 0.5][0]
    assert mid.value == pytest.approx(0.5 * C_OPT_HALF_HALF, abs=1e-13)
    assert mid.meta["curve"] == "(i)-optimal-bound"
    assert mid.meta["monotone"] == "concurrence"


def test_optimal_bound_curve_ebar_nonincreasing():
    grid = list(np.linspace(0.02, 0.98, 49))
    pts = optimal_bound_curve(ChannelSpec(0.4), grid, CONCURRENCE)
    ebars = [p.meta["e_bar"] for p in pts]
    assert all(b <= a + 1e-12 for a, b in zip(ebars, ebars[1:]))


def test_optimal_bound_curve_eof_monotone():
    pts = optimal_bound_curve(ChannelSpec(0.5), [0.5], EOF_MONOTONE)
    assert pts[0].meta["e_bar"] < C_OPT_HALF_HALF  # EoF(C) < C on (0, 1)
    with pytest.raises(ValueError, match="empty"):
        optimal_bound_curve(ChannelSpec(0.5), [], CONCURRENCE)


def test_c_opt_flagged_at_unit_success():
    pts = optimal_bound_curve(ChannelSpec(0.5), [0.5, 1.0], CONCURRENCE)
    top = [p for p in pts if p.p_s == 1.0][0]
    assert top.meta["note"] == "unreachable by the optical protocols"
