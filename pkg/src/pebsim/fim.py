"""Fisher information assembly and position error bounds.

For circularly-symmetric complex Gaussian observations with mean mu(eta)
and per-sample noise power sigma^2,

    F = (2 / sigma^2) * sum_{t,n} Re{ conj(d mu / d eta) (d mu / d eta)^T }.

The unknown vector is [x, y, z, (clock bias,) Re g_0, Im g_0, ...] with
one complex gain per path. The position EFIM is the Schur complement of
the nuisance block, and PEB = sqrt(trace(EFIM^-1)).

Two assembly routes exist on purpose. The production route collapses the
subcarrier axis into pairwise delay-moment grams before contracting,
which removes the factor n_subcarriers from the flop count; the dense
route stacks full per-observation gradients. They are algebraically
identical and the test suite holds them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import ChannelModel
from .constants import SPEED_OF_LIGHT
from .errors import InvalidInput, InvalidScenario, NoisePowerZero

RANK_RTOL = 1e-12


@dataclass(frozen=True)
class UnknownsLayout:
    """Index bookkeeping for the unknown vector."""

    n_paths: int
    clock_bias: bool

    @classmethod
    def for_model(cls, model: ChannelModel) -> "UnknownsLayout":
        return cls(n_paths=model.n_paths, clock_bias=model.clock_bias_unknown)

    @property
    def dim(self) -> int:
        return 3 + (1 if self.clock_bias else 0) + 2 * self.n_paths

    @property
    def position(self) -> slice:
        return slice(0, 3)

    @property
    def nuisance(self) -> slice:
        return slice(3, self.dim)

    def labels(self) -> tuple:
        out = ["pos_x", "pos_y", "pos_z"]
        if self.clock_bias:
            out.append("clock_bias")
        for p in range(self.n_paths):
            out.extend([f"gain{p}_re", f"gain{p}_im"])
        return tuple(out)


@dataclass(frozen=True)
class FimResult:
    """Assembled information and derived bound for one scenario."""

    fim: np.ndarray
    layout: UnknownsLayout
    efim_position: np.ndarray
    peb_m: float
    nuisance_degenerate: bool
    null_space: Optional[np.ndarray]


def _coefficient_tensor(model: ChannelModel) -> np.ndarray:
    """K[i, p, t, a]: d mu/d theta_i = sum_{p,a} K * f_n^a * exp(-j2pi f_n tau_p).

    a indexes the subcarrier-frequency power {0, 1} contributed by each
    gradient term; delay and clock-bias terms carry f_n^1, Doppler, beam
    and gain terms f_n^0.
    """
    n_p = model.n_paths
    n_t = model.waveform.n_transmissions
    dim = model.n_unknowns
    t_s = np.arange(n_t, dtype=float) * model.waveform.symbol_period
    ramp = np.exp(2j * np.pi * np.outer(model.dopplers(), t_s))  # (P, T)
    c = model.beam * ramp  # (P, T)
    k = np.zeros((dim, n_p, n_t, 2), dtype=complex)
    g = model.gains
    for axis in range(3):
        k[axis, :, :, 1] = (g * (-2j * np.pi) * model.d_delay_dpos[:, axis])[:, None] * c
        k[axis, :, :, 0] = (
            g[:, None] * (2j * np.pi) * model.d_doppler_dpos[:, axis][:, None] * t_s[None, :] * c
            + g[:, None] * model.d_beam_dpos[:, :, axis] * ramp
        )
    idx = 3
    if model.clock_bias_unknown:
        k[3, :, :, 1] = (-2j * np.pi) * g[:, None] * c
        idx = 4
    for p in range(n_p):
        k[idx + 2 * p, p, :, 0] = c[p]
        k[idx + 2 * p + 1, p, :, 0] = 1j * c[p]
    return k


def _delay_moment_grams(model: ChannelModel) -> np.ndarray:
    """M[p, q, a, b] = sum_n f_n^(a+b) conj(D_p) D_q with D = exp(-j2pi f tau)."""
    f = model.waveform.baseband_frequencies()
    d = np.exp(-2j * np.pi * np.outer(model.delays(), f))  # (P, N)
    dc = d.conj()
    m0 = dc @ d.T
    m1 = (dc * f) @ d.T
    m2 = (dc * f * f) @ d.T
    n_p = model.n_paths
    m = np.empty((n_p, n_p, 2, 2), dtype=complex)
    m[:, :, 0, 0] = m0
    m[:, :, 0, 1] = m1
    m[:, :, 1, 0] = m1
    m[:, :, 1, 1] = m2
    return m


def assemble_fim(model: ChannelModel) -> np.ndarray:
    """Fisher information matrix over the model's unknown vector."""
    if model.noise_power_w <= 0:
        raise NoisePowerZero("per-subcarrier noise power must be positive")
    dim = model.n_unknowns
    if model.n_paths == 0:
        return np.zeros((dim, dim))
    k = _coefficient_tensor(model)
    m = _delay_moment_grams(model)
    f = np.einsum("ipta,pqab,jqtb->ij", k.conj(), m, k, optimize=True)
    return (2.0 / model.noise_power_w) * f.real


def gradient_tensor(model: ChannelModel) -> np.ndarray:
    """Dense gradient stack (dim, T, N); reference route for validation."""
    f = model.waveform.baseband_frequencies()
    d = np.exp(-2j * np.pi * np.outer(model.delays(), f))  # (P, N)
    k = _coefficient_tensor(model)  # (dim, P, T, 2)
    powers = np.stack([np.ones_like(f), f])  # (2, N)
    return np.einsum("ipta,an,pn->itn", k, powers, d)


def assemble_fim_dense(model: ChannelModel) -> np.ndarray:
    """Dense-route FIM; identical in exact arithmetic to assemble_fim."""
    if model.noise_power_w <= 0:
        raise NoisePowerZero("per-subcarrier noise power must be positive")
    dim = model.n_unknowns
    if model.n_paths == 0:
        return np.zeros((dim, dim))
    grad = gradient_tensor(model)
    f = np.einsum("itn,jtn->ij", grad.conj(), grad)
    return (2.0 / model.noise_power_w) * f.real


def efim_position(fim: np.ndarray, layout: UnknownsLayout):
    """Schur complement of the nuisance block onto the position block.

    Returns (efim, degenerate, null_space_of_nuisance). A singular
    nuisance block is reduced with its pseudoinverse and flagged.
    """
    fim = np.asarray(fim, dtype=float)
    if fim.shape != (layout.dim, layout.dim):
        raise InvalidInput(f"FIM shape {fim.shape} does not match layout dim {layout.dim}")
    f_pp = fim[layout.position, layout.position]
    f_nn = fim[layout.nuisance, layout.nuisance]
    if f_nn.size == 0:
        return f_pp.copy(), False, None
    f_pn = fim[layout.position, layout.nuisance]
    w, v = np.linalg.eigh(0.5 * (f_nn + f_nn.T))
    w_max = float(w[-1]) if w.size else 0.0
    keep = w > max(w_max, 0.0) * RANK_RTOL
    degenerate = bool(np.any(~keep))
    null = v[:, ~keep][:, :1].ravel() if degenerate and np.any(~keep) else None
    if not np.any(keep):
        return f_pp.copy(), True, null
    v_k = v[:, keep]
    inv_w = 1.0 / w[keep]
    corr = (f_pn @ v_k) * inv_w @ (v_k.T @ f_pn.T)
    return f_pp - corr, degenerate, null


def peb(efim: np.ndarray) -> float:
    """sqrt(trace(EFIM^-1)); +inf when fewer than 3 informative dimensions."""
    value, _ = peb_with_null_space(efim)
    return value


def peb_with_null_space(efim: np.ndarray):
    """PEB plus the uninformative direction when the EFIM is singular."""
    e = np.asarray(efim, dtype=float)
    if e.shape != (3, 3):
        raise InvalidInput(f"position EFIM must be 3x3, got {e.shape}")
    w, v = np.linalg.eigh(0.5 * (e + e.T))
    w_max = float(w[-1])
    if w_max <= 0 or w[0] <= w_max * RANK_RTOL:
        return float("inf"), v[:, 0]
    return float(np.sqrt(np.sum(1.0 / w))), None


def evaluate(model: ChannelModel) -> FimResult:
    """Assemble, reduce, and bound in one call."""
    layout = UnknownsLayout.for_model(model)
    fim = assemble_fim(model)
    efim, degenerate, nuis_null = efim_position(fim, layout)
    value, pos_null = peb_with_null_space(efim)
    null = pos_null if pos_null is not None else nuis_null
    return FimResult(
        fim=fim,
        layout=layout,
        efim_position=efim,
        peb_m=value,
        nuisance_degenerate=degenerate,
        null_space=null,
    )


def _channel_parameter_fim_and_jacobian(model: ChannelModel):
    """FIM over stacked channel parameters and its position Jacobian.

    Channel parameters per path: delay, azimuth, elevation, (Doppler for
    direct paths,) Re gain, Im gain. The Jacobian maps the model unknowns
    [position, (bias,) gains] into channel-parameter space.
    """
    n_t = model.waveform.n_transmissions
    t_s = np.arange(n_t, dtype=float) * model.waveform.symbol_period
    ramp = np.exp(2j * np.pi * np.outer(model.dopplers(), t_s))
    c = model.beam * ramp
    rows = []
    jac_rows = []
    dim = model.n_unknowns
    bias = 1 if model.clock_bias_unknown else 0
    n_p = model.n_paths
    for p, path in enumerate(model.paths):
        g = model.gains[p]
        jac = path.jacobians
        # delay
        k = np.zeros((n_p, n_t, 2), dtype=complex)
        k[p, :, 1] = -2j * np.pi * g * c[p]
        row_j = np.zeros(dim)
        row_j[:3] = jac.d_delay
        if bias:
            row_j[3] = 1.0
        rows.append(k)
        jac_rows.append(row_j)
        # azimuth / elevation of the user-facing anchor
        d_ang_pos = (
            (jac.d_sat_azimuth, jac.d_sat_elevation)
            if path.kind == "los"
            else (jac.d_ris_azimuth, jac.d_ris_elevation)
        )
        for ang_axis in range(2):
            k = np.zeros((n_p, n_t, 2), dtype=complex)
            k[p, :, 0] = g * model.d_beam_dangles[p, :, ang_axis] * ramp[p]
            row_j = np.zeros(dim)
            row_j[:3] = d_ang_pos[ang_axis]
            rows.append(k)
            jac_rows.append(row_j)
        if path.kind == "los":
            k = np.zeros((n_p, n_t, 2), dtype=complex)
            k[p, :, 0] = 2j * np.pi * t_s * g * c[p]
            row_j = np.zeros(dim)
            row_j[:3] = jac.d_doppler
            rows.append(k)
            jac_rows.append(row_j)
        for part, factor in ((0, 1.0), (1, 1j)):
            k = np.zeros((n_p, n_t, 2), dtype=complex)
            k[p, :, 0] = factor * c[p]
            row_j = np.zeros(dim)
            row_j[3 + bias + 2 * p + part] = 1.0
            rows.append(k)
            jac_rows.append(row_j)

    k_eta = np.stack(rows)  # (D_eta, P, T, 2)
    m = _delay_moment_grams(model)
    f_eta = np.einsum("ipta,pqab,jqtb->ij", k_eta.conj(), m, k_eta, optimize=True)
    f_eta = (2.0 / model.noise_power_w) * f_eta.real
    j = np.stack(jac_rows)  # (D_eta, dim)
    return f_eta, j


def chain_rule_check(model: ChannelModel) -> float:
    """Max relative element-wise discrepancy between two FIM routes.

    Route one differentiates the observation mean directly in the
    unknown domain; route two assembles the channel-parameter FIM and
    sandwiches it with the geometry Jacobians (J^T F_eta J). The
    discrepancy is normalized by the largest absolute entry of the
    direct-route matrix.
    """
    direct = assemble_fim(model)
    f_eta, j = _channel_parameter_fim_and_jacobian(model)
    sandwiched = j.T @ f_eta @ j
    scale = float(np.max(np.abs(direct)))
    if scale == 0.0:
        return float(np.max(np.abs(sandwiched)))
    return float(np.max(np.abs(direct - sandwiched)) / scale)


@dataclass(frozen=True)
class DelayToy:
    """Single-path, known-gain, delay-only estimation problem."""

    true_delay_s: float
    gain: complex = 1.0 + 0.0j
    n_subcarriers: int = 512
    subcarrier_spacing_hz: float = 100.0e3
    n_transmissions: int = 1
    noise_power_w: float = 1e-3

    def __post_init__(self):
        if not 0 < self.true_delay_s < 1.0 / self.subcarrier_spacing_hz:
            raise InvalidInput("true delay must lie inside the unambiguous range")

    @classmethod
    def from_channel(cls, model: ChannelModel, **kwargs) -> "DelayToy":
        if model.n_paths != 1:
            raise InvalidScenario("delay oracle requires exactly one path")
        path = model.paths[0]
        return cls(
            true_delay_s=path.delay_s,
            gain=model.gains[0] * model.beam[0, 0],
            n_subcarriers=model.waveform.n_subcarriers,
            subcarrier_spacing_hz=model.waveform.subcarrier_spacing_hz,
            n_transmissions=model.waveform.n_transmissions,
            noise_power_w=model.noise_power_w,
            **kwargs,
        )

    def frequencies(self) -> np.ndarray:
        n = np.arange(self.n_subcarriers, dtype=float)
        return (n - (self.n_subcarriers - 1) / 2.0) * self.subcarrier_spacing_hz

    def crlb_s2(self) -> float:
        """Delay CRLB (variance, s^2) for the known-gain problem."""
        f = self.frequencies()
        snr_total = (
            self.n_transmissions
            * self.n_subcarriers
            * abs(self.gain) ** 2
            / self.noise_power_w
        )
        fbar2 = float(np.mean(f**2))
        return 1.0 / (8.0 * np.pi**2 * snr_total * fbar2)


def _ml_delay_estimate(toy: DelayToy, y: np.ndarray) -> float:
    """Correlation peak, parabolic refinement, then Newton polish.

    y has shape (n_transmissions, n_subcarriers).
    """
    n = toy.n_subcarriers
    x = np.sum(y, axis=0) * np.conj(toy.gain)  # coherent across transmissions
    m = 1
    while m < 8 * n:
        m *= 2
    spectrum = np.fft.ifft(x, m) * m  # C(tau_k) magnitude on grid k/(m df)
    power = np.abs(spectrum) ** 2
    k_peak = int(np.argmax(power))
    grid = 1.0 / (m * toy.subcarrier_spacing_hz)
    # parabola through the peak sample and its two neighbours (cyclic grid)
    left = power[(k_peak - 1) % m]
    mid = power[k_peak]
    right = power[(k_peak + 1) % m]
    denom = left - 2.0 * mid + right
    offset = 0.0 if denom >= 0 else 0.5 * (left - right) / denom
    tau = (k_peak + offset) * grid
    f = toy.frequencies()
    # Newton on the stationary point of |C(tau)|^2
    for _ in range(12):
        e = np.exp(2j * np.pi * f * tau)
        c0 = np.sum(x * e)
        c1 = np.sum(2j * np.pi * f * x * e)
        c2 = np.sum((2j * np.pi * f) ** 2 * x * e)
        d1 = 2.0 * np.real(np.conj(c0) * c1)
        d2 = 2.0 * (np.real(np.conj(c1) * c1) + np.real(np.conj(c0) * c2))
        if d2 >= 0:
            break
        step = d1 / d2
        tau -= step
        if abs(step) < 1e-18:
            break
    return float(tau)


def ml_delay_oracle(toy: DelayToy, trials: int, rng: np.random.Generator) -> dict:
    """Monte-Carlo RMSE of the ML delay estimator against the CRLB.

    Returns a dict with keys rmse_s, crlb_rmse_s, ratio.
    """
    if trials < 1:
        raise InvalidInput("need at least one trial")
    f = toy.frequencies()
    mean = toy.gain * np.exp(-2j * np.pi * f * toy.true_delay_s)
    mean = np.broadcast_to(mean, (toy.n_transmissions, toy.n_subcarriers))
    sigma = math.sqrt(toy.noise_power_w / 2.0)
    errors = np.empty(trials)
    for trial in range(trials):
        noise = sigma * (
            rng.standard_normal(mean.shape) + 1j * rng.standard_normal(mean.shape)
        )
        est = _ml_delay_estimate(toy, mean + noise)
        errors[trial] = est - toy.true_delay_s
    rmse = float(np.sqrt(np.mean(errors**2)))
    crlb_rmse = math.sqrt(toy.crlb_s2())
    return {"rmse_s": rmse, "crlb_rmse_s": crlb_rmse, "ratio": rmse / crlb_rmse}
