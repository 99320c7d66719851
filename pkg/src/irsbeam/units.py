"""Decibel and milliwatt-decibel conversions.

Powers are carried in watts internally; interfaces that speak dB/dBm
convert at the boundary: watts = 10**((dBm - 30) / 10).
"""

import numpy as np


def db_to_linear(value_db):
    """Convert a ratio in dB to linear scale."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    """Convert a linear ratio to dB."""
    return 10.0 * np.log10(value)


def dbm_to_watt(power_dbm):
    """Convert power in dBm to watts."""
    return 10.0 ** ((np.asarray(power_dbm, dtype=float) - 30.0) / 10.0)


def watt_to_dbm(power_w):
    """Convert power in watts to dBm (+inf maps to +inf)."""
    return 10.0 * np.log10(power_w) + 30.0
