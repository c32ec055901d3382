"""Physical constants in Gaussian (CGS) units."""

C_LIGHT = 2.99792458e10  # cm / s
HBAR = 1.0546e-27  # erg s
K_B = 1.3807e-16  # erg / K


def thermal_frequency(T):
    """k_B T / hbar in s^-1."""
    return K_B * T / HBAR
