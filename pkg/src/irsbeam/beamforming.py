"""Zero-forcing active beamforming for a fixed IRS reflection vector.

For K single-antenna users served by an M-antenna BS through effective
channels H (K x M rows), the ZF precoder W = H^H (H H^H)^-1 U^{1/2}
nulls all inter-user interference, so the smallest per-user power that
meets an SINR target gamma_k at noise sigma_k^2 is u_k = sigma_k^2 *
gamma_k, and the total transmit power is tr(U (H H^H)^-1).

Near-singular H H^H makes ZF meaningless; such candidates come back as
infeasible solutions carrying a +inf power sentinel rather than raising,
so stochastic search loops stay total.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .channel import ChannelSet
from .exceptions import ConfigurationError
from .units import db_to_linear, dbm_to_watt

__all__ = [
    "ReflectionVector",
    "SinrTargets",
    "BeamformingSolution",
    "effective_channel",
    "zf_solution",
    "sinr_audit",
    "score_reflection",
]

# Reciprocal-condition floor below which H H^H is treated as singular.
RCOND_SINGULAR = 1e-12


@dataclass
class ReflectionVector:
    """Discrete unit-modulus reflection coefficients for the IRS.

    Each element applies e^{j * q * delta} with q an integer level index
    in {0, ..., 2**bits - 1} and delta = 2*pi / 2**bits. With one bit the
    coefficient set is {+1, -1}: level 0 maps to +1, level 1 to -1.
    """

    indices: np.ndarray
    bits: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        if self.bits < 1:
            raise ConfigurationError(f"bits must be >= 1, got {self.bits}")
        if self.indices.ndim != 1 or self.indices.size < 1:
            raise ConfigurationError("indices must be a non-empty 1-D array")
        if self.indices.min() < 0 or self.indices.max() >= self.num_levels:
            raise ConfigurationError(
                f"phase indices must lie in [0, {self.num_levels}), "
                f"got range [{self.indices.min()}, {self.indices.max()}]"
            )

    @property
    def num_levels(self) -> int:
        return 2**self.bits

    @property
    def num_elements(self) -> int:
        return self.indices.size

    @property
    def coefficients(self) -> np.ndarray:
        """Complex reflection coefficients e^{j * q * 2pi / 2**bits}."""
        return np.exp(2j * np.pi * self.indices / self.num_levels)

    @property
    def signs(self) -> np.ndarray:
        """One-bit coefficients as exact +1/-1 integers."""
        if self.bits != 1:
            raise ConfigurationError("signs only defined for bits == 1")
        return 1 - 2 * self.indices

    @classmethod
    def all_zero(cls, num_elements: int, bits: int) -> "ReflectionVector":
        """All elements at phase level 0 (coefficient +1)."""
        return cls(indices=np.zeros(num_elements, dtype=np.int64), bits=bits)


@dataclass
class SinrTargets:
    """Per-user SINR requirements (linear) and noise powers (watts)."""

    gamma: np.ndarray
    sigma2: np.ndarray

    def __post_init__(self):
        self.gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        self.sigma2 = np.atleast_1d(np.asarray(self.sigma2, dtype=float))
        if self.gamma.shape != self.sigma2.shape:
            raise ConfigurationError(
                f"gamma and sigma2 must have equal length, got {self.gamma.shape} "
                f"vs {self.sigma2.shape}"
            )
        if np.any(self.gamma <= 0) or np.any(self.sigma2 <= 0):
            raise ConfigurationError("SINR targets and noise powers must be > 0")

    @property
    def num_users(self) -> int:
        return self.gamma.size

    @classmethod
    def from_db(cls, gamma_db, noise_dbm, num_users: int | None = None) -> "SinrTargets":
        """Build from targets in dB and noise in dBm; scalars broadcast over users."""
        gamma = np.atleast_1d(db_to_linear(gamma_db))
        sigma2 = np.atleast_1d(dbm_to_watt(noise_dbm))
        if num_users is not None:
            if gamma.size == 1:
                gamma = np.full(num_users, gamma[0])
            if sigma2.size == 1:
                sigma2 = np.full(num_users, sigma2[0])
        return cls(gamma=gamma, sigma2=sigma2)


@dataclass
class BeamformingSolution:
    """ZF precoder with minimal power meeting the targets, or an infeasible marker.

    ``total_power`` comes from the trace formula tr(U (H H^H)^-1) and for
    feasible solutions matches the column-norm sum of ``w`` to tight
    relative tolerance. Infeasible solutions carry ``total_power`` = +inf
    and no precoder.
    """

    feasible: bool
    total_power: float
    w: np.ndarray | None = None
    power_per_user: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def infeasible(cls) -> "BeamformingSolution":
        return cls(feasible=False, total_power=np.inf)


def effective_channel(channels: ChannelSet, phi: ReflectionVector) -> np.ndarray:
    """Per-user effective row channels h_r,k^H diag(phi) G + h_d,k^H.

    Returns the K x M matrix whose row k the precoder column w_k must
    serve. Recomputed from the raw links on every call so any candidate
    reflection vector can be scored against a shared read-only ChannelSet.
    """
    if phi.num_elements != channels.num_irs_elements:
        raise ConfigurationError(
            f"reflection vector has {phi.num_elements} elements, channel has "
            f"{channels.num_irs_elements}"
        )
    reflected = (np.conj(channels.h_r) * phi.coefficients[None, :]) @ channels.g
    return reflected + np.conj(channels.h_d)


def zf_solution(h_eff: np.ndarray, targets: SinrTargets) -> BeamformingSolution:
    """Zero-forcing precoder meeting every SINR target with equality.

    Parameters
    ----------
    h_eff : ndarray, shape (K, M)
        Effective channel rows.
    targets : SinrTargets
        Per-user linear SINR requirements and noise powers in watts.

    Returns
    -------
    BeamformingSolution
        Feasible with W = H^H (H H^H)^-1 U^{1/2} and u_k = sigma_k^2 *
        gamma_k, or the infeasible sentinel when H H^H is numerically
        singular (reciprocal condition below ``RCOND_SINGULAR``).

    Raises
    ------
    ConfigurationError
        If there are more users than BS antennas, which ZF cannot serve.
    """
    h_eff = np.atleast_2d(np.asarray(h_eff, dtype=complex))
    num_users, num_antennas = h_eff.shape
    if num_users > num_antennas:
        raise ConfigurationError(
            f"ZF needs at least as many antennas as users, got K={num_users} > M={num_antennas}"
        )
    if targets.num_users != num_users:
        raise ConfigurationError(
            f"targets cover {targets.num_users} users, channel has {num_users}"
        )

    gram = h_eff @ h_eff.conj().T
    singular_values = np.linalg.svd(gram, compute_uv=False)
    if singular_values[0] == 0 or singular_values[-1] / singular_values[0] < RCOND_SINGULAR:
        return BeamformingSolution.infeasible()

    u = targets.sigma2 * targets.gamma
    try:
        factor = cho_factor(gram)
    except LinAlgError:
        return BeamformingSolution.infeasible()
    gram_inv = cho_solve(factor, np.eye(num_users, dtype=complex))
    w = h_eff.conj().T @ (gram_inv * np.sqrt(u)[None, :])
    total_power = float(np.real(np.sum(u * np.diag(gram_inv))))
    power_per_user = np.sum(np.abs(w) ** 2, axis=0)
    return BeamformingSolution(
        feasible=True, total_power=total_power, w=w, power_per_user=power_per_user
    )


def sinr_audit(
    channels: ChannelSet,
    phi: ReflectionVector,
    w: np.ndarray,
    sigma2: np.ndarray,
) -> np.ndarray:
    """Achieved per-user SINR of an arbitrary precoder, from the raw channels.

    Independent of the ZF construction: rebuilds the effective channels
    and evaluates |h_k w_k|^2 / (sum_{j != k} |h_k w_j|^2 + sigma_k^2),
    so it can audit any beamformer, not just ZF output.
    """
    h_eff = effective_channel(channels, phi)
    received = h_eff @ w
    power = np.abs(received) ** 2
    signal = np.diag(power)
    interference = power.sum(axis=1) - signal
    return signal / (interference + np.asarray(sigma2, dtype=float))


def score_reflection(
    channels: ChannelSet, phi: ReflectionVector, targets: SinrTargets
) -> BeamformingSolution:
    """Score one reflection vector: effective channel plus ZF solve.

    This is the unit the cost counters use ("one evaluation").
    """
    return zf_solution(effective_channel(channels, phi), targets)
