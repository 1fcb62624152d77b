"""Brute-force verifier in a truncated photon-number basis.

The whole optical chain (qubit-pulse rotation, displacement, loss isometry,
50/50 beam splitter, nondemolition comparison, photon counting) is simulated
with explicit operators on truncated Fock vectors: displacements via the
exponential of delta a^dag - delta* a, and any passive mode mixing via the
exponential of the quadratic generator i log(M), applied photon-sector by
photon-sector (the generator conserves total photon number, so each sector
carries an exactly unitary rotation; sectors that spill past the truncation
are cut honestly and show up in the norm deficit). No closed form from
:mod:`entgen.protocol` or :mod:`entgen.bound` enters any oracle quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bound import ChannelSpec
from .entanglement import (
    CONCURRENCE,
    Monotone,
    concurrence_wootters,
    damping_factor,
    monotone_value,
    reduce_rank2_qubit_qudit,
)
from .protocol import (
    OutcomeRecord,
    ProtocolParams,
    branch_amplitudes,
    outcome_concurrence,
    outcome_probability,
    qnd_concurrence,
    success_probability,
)

NORM_DEFICIT_BUDGET = 1e-10


class TruncationError(RuntimeError):
    """Raised when the requested cutoff cannot hold the state."""


# ---------------------------------------------------------------------------
# Registers and elementary operators
# ---------------------------------------------------------------------------


@dataclass
class FockRegister:
    """Qubit axes (dimension 2, leading) plus mode axes (dimension nmax+1)."""

    nmax: int
    amps: np.ndarray
    nqubits: int = 0

    def __post_init__(self) -> None:
        d = self.nmax + 1
        expected = (2,) * self.nqubits + (d,) * (self.amps.ndim - self.nqubits)
        if self.amps.shape != expected:
            raise ValueError(f"amplitude shape {self.amps.shape} does not match {expected}")

    @property
    def nmodes(self) -> int:
        return self.amps.ndim - self.nqubits

    def mode_axis(self, mode: int) -> int:
        if not 0 <= mode < self.nmodes:
            raise ValueError(f"mode index {mode} out of range for {self.nmodes} modes")
        return self.nqubits + mode

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def norm_deficit(self) -> float:
        return 1.0 - self.norm_sq()

    def check_budget(self, budget: float = NORM_DEFICIT_BUDGET) -> "FockRegister":
        deficit = self.norm_deficit()
        if deficit > budget:
            raise TruncationError(
                f"truncation insufficient: norm deficit {deficit:.3e} exceeds budget {budget:.1e}"
            )
        return self


def coherent_amplitudes(amplitude: complex, nmax: int) -> np.ndarray:
    """Truncated coherent-state vector e^{-|A|^2/2} A^n / sqrt(n!)."""
    amps = np.empty(nmax + 1, dtype=complex)
    amps[0] = 1.0
    for n in range(nmax):
        amps[n + 1] = amps[n] * amplitude / math.sqrt(n + 1.0)
    amps *= math.exp(-abs(amplitude) ** 2 / 2.0)
    return amps


def coherent_fock(amplitude: complex, nmax: int) -> FockRegister:
    """Single-mode coherent state, with a conservative truncation guard."""
    mean = abs(amplitude) ** 2
    needed = mean + 10.0 * math.sqrt(mean + 1.0) + 20.0
    if nmax < needed:
        raise TruncationError(
            f"truncation insufficient: nmax={nmax} below {math.ceil(needed)} "
            f"required for |amplitude|^2={mean:.3f}"
        )
    reg = FockRegister(nmax=nmax, amps=coherent_amplitudes(amplitude, nmax))
    return reg.check_budget(1e-12)


@lru_cache(maxsize=32)
def displacement_matrix(delta: complex, nmax: int) -> np.ndarray:
    """exp(delta a^dag - delta* a) on the truncated space (unitary by eigh)."""
    d = nmax + 1
    ladder = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        ladder[n - 1, n] = math.sqrt(n)  # annihilation
    h = -1j * delta * ladder.conj().T + 1j * np.conj(delta) * ladder
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


@lru_cache(maxsize=32)
def _mixer_sectors(m_key: tuple[complex, complex, complex, complex], nmax: int):
    """Per-photon-sector blocks of the two-mode unitary with U|a1,a2> = |M(a1,a2)>.

    U = exp(-i G) with G = sum_ij c_ij a_i^dag a_j and c = i log M, so that
    U a_k^dag U^dag = sum_i M_ik a_i^dag and coherent inputs follow M with no
    extra phase. Sector N (total photons) restricted to the truncated grid.
    """
    m = np.array(m_key, dtype=complex).reshape(2, 2)
    w, vecs = np.linalg.eig(m)
    c = 1j * (vecs @ np.diag(np.log(w)) @ np.linalg.inv(vecs))
    c = (c + c.conj().T) / 2  # principal log of a unitary is i * Hermitian
    if np.abs(vecs @ np.diag(w) @ np.linalg.inv(vecs) - m).max() > 1e-12:
        raise ValueError("mode-mixing matrix could not be diagonalized accurately")

    sectors = []
    for total in range(2 * nmax + 1):
        ks_full = np.arange(total + 1)
        gen = np.zeros((total + 1, total + 1), dtype=complex)
        gen[ks_full, ks_full] = c[0, 0] * ks_full + c[1, 1] * (total - ks_full)
        off = c[0, 1] * np.sqrt((ks_full[:-1] + 1.0) * (total - ks_full[:-1]))
        gen[ks_full[:-1] + 1, ks_full[:-1]] = off
        gen[ks_full[:-1], ks_full[:-1] + 1] = np.conj(off)
        ew, ev = np.linalg.eigh(gen)
        u_full = (ev * np.exp(-1j * ew)) @ ev.conj().T
        keep = ks_full[(ks_full <= nmax) & (total - ks_full <= nmax)]
        sectors.append((keep, np.ascontiguousarray(u_full[np.ix_(keep, keep)])))
    return sectors


def _apply_pair_mixer(amps: np.ndarray, axes: tuple[int, int], m: np.ndarray, nmax: int) -> np.ndarray:
    sectors = _mixer_sectors(tuple(np.asarray(m, dtype=complex).ravel()), nmax)
    work = np.moveaxis(amps, axes, (0, 1))
    lead = work.shape[:2]
    flat = work.reshape(lead[0], lead[1], -1)
    out = np.zeros_like(flat)
    for total, (keep, block) in enumerate(sectors):
        if keep.size == 0:
            continue
        out[keep, total - keep, :] = block @ flat[keep, total - keep, :]
    return np.moveaxis(out.reshape(work.shape), (0, 1), axes)


def mode_mixer_dense(m: np.ndarray, nmax: int) -> np.ndarray:
    """Dense (d^2, d^2) matrix of the two-mode mixer (for small density runs)."""
    d = nmax + 1
    dense = np.zeros((d * d, d * d), dtype=complex)
    sectors = _mixer_sectors(tuple(np.asarray(m, dtype=complex).ravel()), nmax)
    for total, (keep, block) in enumerate(sectors):
        if keep.size == 0:
            continue
        flat = keep * d + (total - keep)
        dense[np.ix_(flat, flat)] = block
    return dense


def _loss_matrix(transmittance: float) -> np.ndarray:
    t = math.sqrt(transmittance)
    r = math.sqrt(1.0 - transmittance)
    return np.array([[t, -r], [r, t]], dtype=complex)


_BS_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def lossy_channel(reg: FockRegister, mode: int, transmittance: float) -> FockRegister:
    """Beam-splitter isometry of transmittance T against a fresh vacuum mode.

    The environment is appended as the last mode; coherent inputs map to
    |sqrt(T) a> |sqrt(1-T) a>.
    """
    if not 0.0 < transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in (0, 1], got {transmittance}")
    axis = reg.mode_axis(mode)
    d = reg.nmax + 1
    amps = np.zeros(reg.amps.shape + (d,), dtype=complex)
    amps[..., 0] = reg.amps
    amps = _apply_pair_mixer(amps, (axis, amps.ndim - 1), _loss_matrix(transmittance), reg.nmax)
    return FockRegister(nmax=reg.nmax, amps=amps, nqubits=reg.nqubits)


def beam_splitter_5050(reg: FockRegister, modes: tuple[int, int]) -> FockRegister:
    """50/50 splitter |a1>|a2> -> |(a1+a2)/sqrt2>|(a1-a2)/sqrt2> on two modes."""
    i, j = modes
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    amps = _apply_pair_mixer(reg.amps, (reg.mode_axis(i), reg.mode_axis(j)), _BS_MATRIX, reg.nmax)
    return FockRegister(nmax=reg.nmax, amps=amps, nqubits=reg.nqubits)


def displace(reg: FockRegister, mode: int, delta: complex) -> FockRegister:
    axis = reg.mode_axis(mode)
    u = displacement_matrix(complex(delta), reg.nmax)
    amps = np.tensordot(u, reg.amps, axes=([1], [axis]))
    amps = np.moveaxis(amps, 0, axis)
    return FockRegister(nmax=reg.nmax, amps=amps, nqubits=reg.nqubits)


# ---------------------------------------------------------------------------
# The optical chain
# ---------------------------------------------------------------------------


def recommended_nmax(p: ProtocolParams) -> int:
    """Cutoff rule ceil(mu + 10 sqrt(mu) + 20) over the largest mode occupancy.

    Probe preparation and displacement run at their own extended single-mode
    cutoff, so the joint register only has to hold the post-displacement
    (interferometric) amplitudes.
    """
    t = p.channel.transmittance
    half = math.sin(p.theta / 2.0)
    b = branch_amplitudes(p)
    mu = max(
        b.gamma_plus**2,
        (p.beta * half) ** 2,
        (p.alpha / math.sqrt(t) * half) ** 2,
    )
    return math.ceil(mu + 10.0 * math.sqrt(mu) + 20.0)


def _prepared_qubit_pulse(zeta: float, amplitude: float, theta: float, nmax: int) -> np.ndarray:
    """Steps (1)/(3)-(4) for one party: qubit-conditioned rotation of a coherent
    probe followed by the -cos(theta/2) displacement.

    Returns a (2, nmax+1) array over (qubit, mode). The probe is built and
    displaced at an extended cutoff adequate for its pre-displacement mean
    photon number, then truncated to the register cutoff once compact.
    """
    mean = amplitude * amplitude
    nprep = max(nmax, math.ceil(mean + 10.0 * math.sqrt(mean + 1.0) + 20.0))
    probe = coherent_amplitudes(amplitude, nprep)
    phases = np.exp(1j * (theta / 2.0) * np.arange(nprep + 1))
    qubit = np.array([np.exp(-1j * zeta), np.exp(1j * zeta)]) / math.sqrt(2.0)
    branches = np.stack([qubit[0] * probe * phases, qubit[1] * probe * phases.conj()])
    disp = displacement_matrix(-amplitude * math.cos(theta / 2.0), nprep)
    branches = branches @ disp.T
    out = branches[:, : nmax + 1]
    deficit = 1.0 - float(np.vdot(out, out).real)
    if deficit > NORM_DEFICIT_BUDGET:
        raise TruncationError(
            f"truncation insufficient: norm deficit {deficit:.3e} after probe "
            f"preparation at nmax={nmax}"
        )
    return out


def _alice_stage(p: ProtocolParams, nmax: int) -> FockRegister:
    """Steps (1)-(2): returns axes (qubit A, mode b1, mode e)."""
    t = p.channel.transmittance
    alpha_pre = p.alpha / math.sqrt(t)
    zeta = 0.5 * alpha_pre * alpha_pre * math.sin(p.theta)
    reg = FockRegister(nmax=nmax, amps=_prepared_qubit_pulse(zeta, alpha_pre, p.theta, nmax), nqubits=1)
    return lossy_channel(reg, 0, t).check_budget()


def _bob_pulse(p: ProtocolParams, nmax: int) -> np.ndarray:
    zeta = 0.5 * p.beta * p.beta * math.sin(p.theta)
    return _prepared_qubit_pulse(zeta, p.beta, p.theta, nmax)


def run_optical_chain(p: ProtocolParams, nmax: int) -> FockRegister:
    """Steps (1)-(5); returns axes (qubit A, qubit B, b3, b4, environment)."""
    alice = _alice_stage(p, nmax)  # (qA, b1, e)
    bob = _bob_pulse(p, nmax)  # (qB, b2)

    # Axes (qA, qB, b1, e, b2).
    amps = alice.amps[:, None, :, :, None] * bob[None, :, None, None, :]
    reg = FockRegister(nmax=nmax, amps=amps, nqubits=2)
    reg.check_budget()
    reg = beam_splitter_5050(reg, (0, 2)).check_budget()  # (b1, b2) -> (b3, b4)
    # Reorder (qA, qB, b3, e, b4) -> (qA, qB, b3, b4, e).
    amps = np.moveaxis(reg.amps, 4, 3)
    return FockRegister(nmax=nmax, amps=amps, nqubits=2)


def verify_virtual_reduction(p: ProtocolParams, nmax: int) -> tuple[float, float]:
    """Check Tr_env = phase flip applied to the undamped pure state.

    Returns (fitted flip-free weight f, Frobenius norm of the residual).
    The fit takes the qubit-A coherence block of the traced state against the
    same block of the undamped reference |psi'><psi'|; any phase residual is
    left in the discrepancy rather than absorbed into f.
    """
    alice = _alice_stage(p, nmax)
    d = nmax + 1
    psi = alice.amps  # (2, d, d): (qA, b1, e)

    rho = np.einsum("jxe,kye->jxky", psi, psi.conj()).reshape(2 * d, 2 * d)

    # Undamped reference: factor each branch into (b1) x (env) and rebuild
    # |psi'> = sum_j s_j e^{i(-1)^j xi} |j>|u_j> with 2 xi = arg<v1|v0>.
    u_vecs, v_vecs, weights = [], [], []
    for j in (0, 1):
        left, sing, right = np.linalg.svd(psi[j])
        u_vecs.append(left[:, 0])
        v_vecs.append(right[0, :])
        weights.append(sing[0])
    overlap_env = np.vdot(v_vecs[1], v_vecs[0])
    xi = 0.5 * np.angle(overlap_env)
    psi_prime = np.concatenate(
        [
            weights[0] * np.exp(1j * xi) * u_vecs[0],
            weights[1] * np.exp(-1j * xi) * u_vecs[1],
        ]
    )
    sigma = np.outer(psi_prime, psi_prime.conj())

    ideal_block = sigma[:d, d:]
    meas_block = rho[:d, d:]
    denom = np.vdot(ideal_block, ideal_block)
    if abs(denom) < 1e-30:
        f = 1.0  # no coherence to damp (e.g. alpha = 0 and theta = pi)
    else:
        ratio = np.vdot(ideal_block, meas_block) / denom
        f = float((1.0 + min(abs(ratio), 1.0)) / 2.0)
    model = sigma.copy()
    model[:d, d:] *= 2.0 * f - 1.0
    model[d:, :d] *= 2.0 * f - 1.0
    discrepancy = float(np.linalg.norm(rho - model))
    return f, discrepancy


# ---------------------------------------------------------------------------
# Measurement stage
# ---------------------------------------------------------------------------


@dataclass
class OracleReport:
    """Everything the oracle measures for one parameter point."""

    p_s: float
    qnd_concurrence: float
    outcomes: list[OutcomeRecord] = field(default_factory=list)
    failure_probability: float = math.nan
    phase_flip_f: float | None = None
    max_discrepancy: float | None = None


def _two_qubit_from_counts(amps: np.ndarray, m: int, n: int, prob: float) -> np.ndarray:
    """Heralded (A, B) state for detector counts (m, n); env traced via the sum."""
    c = amps[:, :, m, n, :]  # (qA, qB, e)
    rho = np.einsum("jke,ile->jkil", c, c.conj()).reshape(4, 4) / prob
    return (rho + rho.conj().T) / 2


def qnd_project_and_measure(
    reg: FockRegister,
    mono: Monotone = CONCURRENCE,
    outcome_floor: float = 1e-12,
    support_tol: float = 1e-9,
) -> OracleReport:
    """Both heralding strategies on a chain output (environment axis last).

    The nondemolition branch zeroes equal-count components, compresses the
    (B, b3, b4) side onto its two-dimensional support (the heralded state is
    a dephased Schmidt-rank-2 pure state, so anything beyond rank 2 signals a
    truncation or phase bug) and evaluates Wootters concurrence; the counting
    branch projects onto each |m, n> and does the same per outcome.
    """
    if reg.nqubits != 2 or reg.nmodes != 3:
        raise ValueError("expected a chain output with qubits (A, B) and modes (b3, b4, e)")
    d = reg.nmax + 1
    amps = reg.amps

    # Outcome probabilities for every (m, n), environment and qubits summed.
    p_grid = np.einsum("jkmne->mn", np.abs(amps) ** 2)
    failure = float(np.trace(p_grid))

    proj = amps.copy()
    idx = np.arange(d)
    proj[:, :, idx, idx, :] = 0.0
    p_s = float(np.vdot(proj, proj).real)

    qnd_c = math.nan
    if p_s > outcome_floor:
        # Purified view: rows (qubit A, env), columns (B, b3, b4).
        x = np.transpose(proj, (0, 4, 1, 2, 3)).reshape(2 * d, 2 * d * d) / math.sqrt(p_s)
        left, sing, _ = np.linalg.svd(x, full_matrices=False)
        if int(np.count_nonzero(sing**2 > support_tol)) > 2:
            raise ValueError(
                "rank-2 reduction invalid: heralded support has "
                f"{int(np.count_nonzero(sing ** 2 > support_tol))} dimensions"
            )
        compressed = (left[:, :2] * sing[:2]).reshape(2, d, 2)  # (qA, e, support)
        rho4 = np.einsum("jes,ket->jskt", compressed, compressed.conj()).reshape(4, 4)
        rho4 = (rho4 + rho4.conj().T) / 2
        rho4 /= rho4.trace().real
        qnd_c = concurrence_wootters(rho4)

    outcomes: list[OutcomeRecord] = []
    for m, n in np.argwhere(p_grid > outcome_floor):
        prob = float(p_grid[m, n])
        c = concurrence_wootters(_two_qubit_from_counts(amps, int(m), int(n), prob))
        outcomes.append(
            OutcomeRecord(
                m=int(m),
                n=int(n),
                probability=prob,
                concurrence=c,
                monotone=monotone_value(mono, c),
            )
        )
    outcomes.sort(key=lambda r: (r.m, r.n))
    return OracleReport(
        p_s=p_s,
        qnd_concurrence=qnd_c,
        outcomes=outcomes,
        failure_probability=failure,
    )


def run_oracle(
    p: ProtocolParams,
    nmax: int | None = None,
    mono: Monotone = CONCURRENCE,
    outcome_floor: float = 1e-12,
) -> OracleReport:
    """Full oracle pass: chain, both measurements, and the dephasing fit."""
    if nmax is None:
        nmax = recommended_nmax(p)
    reg = run_optical_chain(p, nmax)
    report = qnd_project_and_measure(reg, mono=mono, outcome_floor=outcome_floor)
    f, disc = verify_virtual_reduction(p, nmax)
    report.phase_flip_f = f
    report.max_discrepancy = disc
    return report


# ---------------------------------------------------------------------------
# Closed-form comparison grid
# ---------------------------------------------------------------------------


def standard_grid() -> list[ProtocolParams]:
    """Moderate-amplitude parameter grid used for oracle/closed-form checks.

    Verification runs at theta ~ 0.2..pi/2 rather than the operating point
    theta ~ 0.01: the closed forms depend only on alpha sin(theta/2) and
    beta sin(theta/2), and O(1) photon numbers exercise the mathematics far
    harder than trivially truncatable amplitudes.
    """
    points = []
    for t in (0.3, 0.7, 1.0):
        for theta in (0.2, math.pi / 2.0):
            for alpha in (0.0, 0.5, 1.0):
                for beta in (alpha, alpha + 0.5, 2.0 * alpha + 1.0):
                    points.append(
                        ProtocolParams(alpha=alpha, beta=beta, theta=theta, channel=ChannelSpec(t))
                    )
    return points


def verify_point(
    p: ProtocolParams,
    nmax_cap: int = 40,
    outcome_floor: float = 1e-12,
) -> dict:
    """Oracle vs closed forms at one parameter point; returns the discrepancy table."""
    nmax = min(nmax_cap, recommended_nmax(p))
    report = run_oracle(p, nmax, outcome_floor=outcome_floor)
    b = branch_amplitudes(p)
    ps_closed = success_probability(p)

    d_pmn = 0.0
    d_cmn = 0.0
    for rec in report.outcomes:
        if rec.probability <= 1e-12:
            continue
        closed_p = outcome_probability(b, rec.m, rec.n)
        d_pmn = max(d_pmn, abs(rec.probability - closed_p))
        if closed_p > 1e-12:
            d_cmn = max(
                d_cmn, abs(rec.concurrence - outcome_concurrence(b, p.channel, rec.m, rec.n))
            )

    d_qnd = 0.0
    if ps_closed > 1e-9:
        d_qnd = abs(report.qnd_concurrence - qnd_concurrence(p))

    f_closed = (1.0 + damping_factor(b.u_alpha, p.channel.transmittance)) / 2.0
    return {
        "alpha": p.alpha,
        "beta": p.beta,
        "theta": p.theta,
        "T": p.channel.transmittance,
        "nmax": nmax,
        "p_s_closed": ps_closed,
        "p_s_oracle": report.p_s,
        "d_p_s": abs(report.p_s - ps_closed),
        "d_p_mn": d_pmn,
        "d_c_mn": d_cmn,
        "d_qnd_concurrence": d_qnd,
        "d_phase_flip_f": abs(report.phase_flip_f - f_closed),
        "reduction_residual": report.max_discrepancy,
        "completeness_defect": abs(report.p_s + report.failure_probability - 1.0),
    }


def verify_standard_grid(nmax_cap: int = 40, outcome_floor: float = 1e-12) -> list[dict]:
    return [verify_point(p, nmax_cap=nmax_cap, outcome_floor=outcome_floor) for p in standard_grid()]


def max_grid_discrepancy(rows: list[dict]) -> float:
    """Largest oracle/closed-form mismatch across a verification table."""
    keys = ("d_p_s", "d_p_mn", "d_c_mn", "d_qnd_concurrence", "d_phase_flip_f")
    return max(row[key] for row in rows for key in keys)


# ---------------------------------------------------------------------------
# Trace-early density route (commutation of Bob's chain with the dephasing)
# ---------------------------------------------------------------------------


def qnd_via_early_trace(p: ProtocolParams, nmax: int) -> OracleReport:
    """Trace the environment right after the loss, then run Bob on the density.

    Bob's local chain commutes with the dephasing induced by the environment,
    so this must reproduce the keep-the-environment oracle. Dense density
    propagation: keep nmax modest (memory is O((4 d^2)^2)).
    """
    d = nmax + 1
    alice = _alice_stage(p, nmax).amps  # (qA, b1, e)
    rho = np.einsum("jxe,kye->jxky", alice, alice.conj()).reshape(2 * d, 2 * d)

    bob = _bob_pulse(p, nmax).reshape(-1)  # (qB, b2) flattened, already rotated/displaced
    rho = np.kron(rho, np.outer(bob, bob.conj()))
    # Index order is now (qA, b1, qB, b2); bring it to (qA, qB, b1, b2).
    perm = np.transpose(
        np.arange(4 * d * d).reshape(2, d, 2, d), (0, 2, 1, 3)
    ).reshape(-1)
    rho = rho[np.ix_(perm, perm)]

    mixer = np.kron(np.eye(4), mode_mixer_dense(_BS_MATRIX, nmax))
    rho = mixer @ rho @ mixer.conj().T

    mask = np.ones((2, 2, d, d))
    mask[:, :, np.arange(d), np.arange(d)] = 0.0
    mask = mask.reshape(-1)
    rho_s = rho * np.outer(mask, mask)
    p_s = float(np.trace(rho_s).real)

    qnd_c = math.nan
    if p_s > 1e-12:
        # Move qubit A in front of the (B, b3, b4) block for the rank-2 reduction.
        rho_q = reduce_rank2_qubit_qudit(rho_s / p_s)
        qnd_c = concurrence_wootters(rho_q)

    rho_t = rho.reshape(2, 2, d, d, 2, 2, d, d)
    outcomes = []
    p_grid = np.einsum("jkmnjkmn->mn", rho_t).real
    for m, n in np.argwhere(p_grid > 1e-12):
        prob = float(p_grid[m, n])
        block = rho_t[:, :, m, n, :, :, m, n].reshape(4, 4) / prob
        block = (block + block.conj().T) / 2
        outcomes.append(
            OutcomeRecord(
                m=int(m),
                n=int(n),
                probability=prob,
                concurrence=concurrence_wootters(block),
                monotone=math.nan,
            )
        )
    outcomes.sort(key=lambda r: (r.m, r.n))
    return OracleReport(
        p_s=p_s,
        qnd_concurrence=qnd_c,
        outcomes=outcomes,
        failure_probability=float(np.trace(p_grid)),
    )
