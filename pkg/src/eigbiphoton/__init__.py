"""Biphoton wave packets shaped by an electromagnetically induced grating in a cold double-Lambda medium."""

__version__ = "0.1.0"

from .biphoton import (  # noqa: E402
    CoincidenceTrace,
    ComplexSpectrum,
    Regime,
    RegimeConfig,
    array_factor,
    array_factor_closed_form,
    coincidence,
    coincidence_phasematch,
    coincidence_resonance,
    coincidence_resonance_numeric,
    joint_spectrum,
    single_slit_amplitude,
    two_photon_amplitude,
)
from .diffraction import AngularPattern, angular_pattern, order_angle, zeroth_order_fraction  # noqa: E402
from .medium import (  # noqa: E402
    AtomicParams,
    GratingGeometry,
    MediumResponse,
    absorption,
    chi3_as,
    chi_linear_as,
    chi_linear_s,
    effective_rabi,
    group_velocity,
    transmission_profile,
)
from .specfun import (  # noqa: E402
    ConvergenceError,
    FrequencyWindow,
    NumericalError,
    QuadratureSpec,
    WindowTooNarrowError,
    csinc,
    oscillatory_ft,
    struve_h0,
)
