"""Coherence harvested by an inertial Unruh-DeWitt detector from axion dark matter."""

from .axion import (
    AxionBackground,
    CoherentAmplitude,
    amplitude,
    coherent_amplitude,
    de_broglie_wavelength_cm,
    energy_density,
    occupation_number,
    pressure,
)
from .coherence import (
    CoherenceResult,
    DensityMatrix2,
    Regime,
    coherence_estimate,
    coherence_exact,
    coherence_longtime,
    electron_detector_coherence,
    l1_coherence,
    reduced_density_matrix,
)
from .detector import DetectorConfig, doppler_frequency, smearing, smearing_fourier, switching
from .response import Method, ResponsePair, response_analytic, response_quadrature
from .units import Quantity, density_GeV_cm3_to_eV4, length_inverse_eV_to_cm, seconds_to_inverse_eV

__version__ = "0.1.0"
