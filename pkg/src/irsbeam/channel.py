"""Geometric multipath channel generation for the BS-IRS-user layout.

Three links are modeled: BS to IRS (a matrix, IRS elements along rows),
IRS to user k (a vector per user) and BS to user k (a vector per user).
Each link is a sum of a few planar-wavefront paths with complex gains,
built from uniform-planar-array (UPA) steering vectors and normalized so
that the expected squared Frobenius norm equals the element-count product
of the arrays involved. Distance-dependent path loss is applied as a
separate amplitude scaling step.

All randomness flows through an explicit ``numpy.random.Generator``. Per
link the draw order is: complex gains, then azimuth angles, then
elevation angles (for the BS-IRS link: arrival pair first, departure pair
second), so a seeded generator reproduces channels bit-for-bit.
"""

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ConfigurationError

__all__ = [
    "UpaGeometry",
    "PathParams",
    "PathLossModel",
    "ChannelSet",
    "steering_vector",
    "bs_irs_channel",
    "user_link_channel",
    "draw_path_params",
    "generate_channel_G",
    "generate_channel_hr",
    "generate_channel_hd",
    "apply_path_loss",
    "draw_channel_set",
]


@dataclass
class UpaGeometry:
    """Uniform planar array: ``n1`` elements along the horizon, ``n2`` vertical.

    Only the spacing-to-wavelength ratio enters the steering phase, so the
    carrier frequency never appears here. Half-wavelength spacing is the
    usual deployment and the default.
    """

    n1: int
    n2: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ConfigurationError(
                f"array dimensions must be positive, got ({self.n1}, {self.n2})"
            )
        if self.spacing_over_wavelength <= 0:
            raise ConfigurationError(
                f"spacing_over_wavelength must be > 0, got {self.spacing_over_wavelength}"
            )

    @property
    def size(self) -> int:
        """Total element count."""
        return self.n1 * self.n2


@dataclass
class PathParams:
    """One propagation path: complex gain and the angle pair seen at the array.

    ``azimuth``/``elevation`` are the angles at the array whose steering
    vector consumes them (arrival side for the BS-IRS link). The BS-IRS
    link additionally carries the departure pair seen at the BS.
    """

    gain: complex
    azimuth: float
    elevation: float
    departure_azimuth: float | None = None
    departure_elevation: float | None = None

    def __post_init__(self):
        angles = [self.azimuth, self.elevation]
        if self.departure_azimuth is not None:
            angles += [self.departure_azimuth, self.departure_elevation]
        if not all(np.isfinite(a) for a in angles):
            raise ConfigurationError(f"path angles must be finite, got {angles}")


@dataclass
class PathLossModel:
    """Distance-dependent average power attenuation per link.

    Received power scales by ``reference_gain * distance**-exponent``;
    channel entries are scaled by the square root of that factor.
    """

    distance_bs_irs_m: float
    distance_irs_user_m: float
    distance_bs_user_m: float
    reference_gain: float = 1e-3
    exponent_bs_irs: float = 2.2
    exponent_irs_user: float = 2.8
    exponent_bs_user: float = 3.5

    def __post_init__(self):
        for name in (
            "distance_bs_irs_m",
            "distance_irs_user_m",
            "distance_bs_user_m",
            "exponent_bs_irs",
            "exponent_irs_user",
            "exponent_bs_user",
        ):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be > 0, got {getattr(self, name)}")

    def power_losses(self) -> tuple[float, float, float]:
        """(BS-IRS, IRS-user, BS-user) power attenuation factors."""
        return (
            self.reference_gain * self.distance_bs_irs_m**-self.exponent_bs_irs,
            self.reference_gain * self.distance_irs_user_m**-self.exponent_irs_user,
            self.reference_gain * self.distance_bs_user_m**-self.exponent_bs_user,
        )


@dataclass
class ChannelSet:
    """One channel realization for all three links.

    Attributes
    ----------
    g : ndarray, shape (N, M)
        BS-to-IRS channel; rows index IRS elements.
    h_r : ndarray, shape (K, N)
        IRS-to-user channels, one row per user.
    h_d : ndarray, shape (K, M)
        BS-to-user channels, one row per user.
    """

    g: np.ndarray
    h_r: np.ndarray
    h_d: np.ndarray

    def __post_init__(self):
        n, m = self.g.shape
        if self.h_r.shape[1] != n or self.h_d.shape[1] != m:
            raise ConfigurationError(
                f"inconsistent link dimensions: g {self.g.shape}, "
                f"h_r {self.h_r.shape}, h_d {self.h_d.shape}"
            )
        if self.h_r.shape[0] != self.h_d.shape[0]:
            raise ConfigurationError(
                f"user counts differ between links: {self.h_r.shape[0]} vs {self.h_d.shape[0]}"
            )
        for name in ("g", "h_r", "h_d"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ConfigurationError(f"channel {name} contains non-finite entries")

    @property
    def num_irs_elements(self) -> int:
        return self.g.shape[0]

    @property
    def num_bs_antennas(self) -> int:
        return self.g.shape[1]

    @property
    def num_users(self) -> int:
        return self.h_r.shape[0]


def steering_vector(geometry: UpaGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """UPA steering vector for the given direction, unit Euclidean norm.

    The planar phase ramp factorizes over the two array axes, so the
    vector is the Kronecker product of a horizontal ramp driven by
    ``sin(azimuth)*cos(elevation)`` and a vertical ramp driven by
    ``sin(elevation)``, divided by the square root of the element count.
    Element ``(i, j)`` of the grid sits at flat index ``i * n2 + j``.

    Parameters
    ----------
    geometry : UpaGeometry
        Array layout; serves both the IRS and the BS array.
    azimuth, elevation : float
        Direction in radians.

    Returns
    -------
    ndarray, shape (n1 * n2,), complex
    """
    phase = -2j * np.pi * geometry.spacing_over_wavelength
    horizontal = np.exp(phase * np.sin(azimuth) * np.cos(elevation) * np.arange(geometry.n1))
    vertical = np.exp(phase * np.sin(elevation) * np.arange(geometry.n2))
    return np.kron(horizontal, vertical) / np.sqrt(geometry.size)


def draw_path_params(
    rng: np.random.Generator, num_paths: int, with_departure: bool = False
) -> list[PathParams]:
    """Draw i.i.d. path parameters for one link.

    Gains are circularly-symmetric complex Gaussian with unit variance,
    azimuths uniform on [0, 2pi), elevations uniform on [-pi/2, pi/2].
    """
    if num_paths < 1:
        raise ConfigurationError(f"path count must be >= 1, got {num_paths}")
    gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(2.0)
    azimuths = rng.uniform(0.0, 2.0 * np.pi, num_paths)
    elevations = rng.uniform(-np.pi / 2, np.pi / 2, num_paths)
    if not with_departure:
        return [PathParams(g, a, e) for g, a, e in zip(gains, azimuths, elevations)]
    dep_azimuths = rng.uniform(0.0, 2.0 * np.pi, num_paths)
    dep_elevations = rng.uniform(-np.pi / 2, np.pi / 2, num_paths)
    return [
        PathParams(g, a, e, departure_azimuth=da, departure_elevation=de)
        for g, a, e, da, de in zip(gains, azimuths, elevations, dep_azimuths, dep_elevations)
    ]


def bs_irs_channel(
    geometry_irs: UpaGeometry, geometry_bs: UpaGeometry, paths: list[PathParams]
) -> np.ndarray:
    """Assemble the N x M BS-to-IRS channel from explicit path parameters.

    Each path contributes the outer product of the IRS steering vector at
    the arrival angles with the (transposed, unconjugated) BS steering
    vector at the departure angles, scaled by sqrt(M*N / L). Rows index
    IRS elements; the matrix rank is at most the path count.
    """
    if not paths:
        raise ConfigurationError("path count must be >= 1, got 0")
    n, m = geometry_irs.size, geometry_bs.size
    g = np.zeros((n, m), dtype=complex)
    for p in paths:
        if p.departure_azimuth is None:
            raise ConfigurationError("BS-IRS paths need a departure angle pair")
        arrive = steering_vector(geometry_irs, p.azimuth, p.elevation)
        depart = steering_vector(geometry_bs, p.departure_azimuth, p.departure_elevation)
        g += p.gain * np.outer(arrive, depart)
    return np.sqrt(m * n / len(paths)) * g


def user_link_channel(geometry: UpaGeometry, paths: list[PathParams]) -> np.ndarray:
    """Assemble a single-ended link vector, sqrt(size / L) * sum of gain * steering."""
    if not paths:
        raise ConfigurationError("path count must be >= 1, got 0")
    h = np.zeros(geometry.size, dtype=complex)
    for p in paths:
        h += p.gain * steering_vector(geometry, p.azimuth, p.elevation)
    return np.sqrt(geometry.size / len(paths)) * h


def generate_channel_G(
    rng: np.random.Generator,
    geometry_irs: UpaGeometry,
    geometry_bs: UpaGeometry,
    num_paths: int,
) -> np.ndarray:
    """Draw a random N x M BS-to-IRS channel with ``num_paths`` paths."""
    return bs_irs_channel(
        geometry_irs, geometry_bs, draw_path_params(rng, num_paths, with_departure=True)
    )


def generate_channel_hr(
    rng: np.random.Generator, geometry_irs: UpaGeometry, num_paths: int
) -> np.ndarray:
    """Draw a random length-N IRS-to-user channel with ``num_paths`` paths."""
    return user_link_channel(geometry_irs, draw_path_params(rng, num_paths))


def generate_channel_hd(
    rng: np.random.Generator, geometry_bs: UpaGeometry, num_paths: int
) -> np.ndarray:
    """Draw a random length-M BS-to-user channel with ``num_paths`` paths."""
    return user_link_channel(geometry_bs, draw_path_params(rng, num_paths))


def apply_path_loss(channels: ChannelSet, model: PathLossModel) -> ChannelSet:
    """Scale every link by the square root of its power attenuation.

    Amplitude scaling, so received power scales by exactly the model's
    power loss. Successive applications compose multiplicatively.
    """
    loss_br, loss_ru, loss_bu = model.power_losses()
    return replace(
        channels,
        g=np.sqrt(loss_br) * channels.g,
        h_r=np.sqrt(loss_ru) * channels.h_r,
        h_d=np.sqrt(loss_bu) * channels.h_d,
    )


def draw_channel_set(
    rng: np.random.Generator,
    geometry_bs: UpaGeometry,
    geometry_irs: UpaGeometry,
    num_users: int,
    paths_bs_irs: int,
    paths_irs_user: int,
    paths_bs_user: int,
    path_loss: PathLossModel | None = None,
) -> ChannelSet:
    """Draw one full realization: G, then h_r per user, then h_d per user.

    The fixed draw order makes a seeded generator reproduce the set
    bit-for-bit. Pass ``path_loss`` to fold the distance attenuation in.
    """
    if num_users < 1:
        raise ConfigurationError(f"num_users must be >= 1, got {num_users}")
    g = generate_channel_G(rng, geometry_irs, geometry_bs, paths_bs_irs)
    h_r = np.stack([generate_channel_hr(rng, geometry_irs, paths_irs_user) for _ in range(num_users)])
    h_d = np.stack([generate_channel_hd(rng, geometry_bs, paths_bs_user) for _ in range(num_users)])
    channels = ChannelSet(g=g, h_r=h_r, h_d=h_d)
    if path_loss is not None:
        channels = apply_path_loss(channels, path_loss)
    return channels
