import numpy as np
import pytest

from irsbeam import ChannelSet, SinrTargets, UpaGeometry, draw_channel_set


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_channel_set(rng, num_elements, num_antennas, num_users):
    """Unstructured unit-scale channels; fast stand-in for the geometric model."""
    return ChannelSet(
        g=complex_gaussian(rng, (num_elements, num_antennas)),
        h_r=complex_gaussian(rng, (num_users, num_elements)),
        h_d=complex_gaussian(rng, (num_users, num_antennas)),
    )


def geometric_channel_set(rng, num_users=2, bs=(2, 2), irs=(4, 2)):
    """Small multipath realization with the default path counts, no path loss."""
    return draw_channel_set(
        rng,
        geometry_bs=UpaGeometry(*bs),
        geometry_irs=UpaGeometry(*irs),
        num_users=num_users,
        paths_bs_irs=4,
        paths_irs_user=5,
        paths_bs_user=3,
    )


@pytest.fixture
def unit_targets():
    return SinrTargets(gamma=np.array([1.0, 1.0]), sigma2=np.array([1.0, 1.0]))
