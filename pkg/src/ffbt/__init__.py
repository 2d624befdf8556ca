"""Finite Fourier-Bessel transforms on disks computed from Cartesian-grid DFTs."""

from .coefficients import (
    CoefficientKernel,
    D_MN,
    ErrorBudget,
    alpha,
    beta_partial,
    build_kernel,
    coeff_c,
    epsilon_plan,
    gamma,
    k_min,
    k_min_block,
)
from .convolution import conv_scaled, ffbt_conv, fft_product_error, iffbt_conv
from .errors import (
    DomainError,
    GridMismatchError,
    InvalidArgumentError,
    NearResonanceError,
    OutOfRegimeError,
    SamplingError,
)
from .fourier import (
    dft2,
    finite_fourier_coeff_1d,
    finite_fourier_coeff_2d,
    finite_fourier_disk,
)
from .sampling import Grid, SampledField, disk_mask, make_grid, sample
from .special import (
    HarmonicIndex,
    bessel_j,
    bessel_zero,
    normalized_radial,
    polar_harmonic,
)
from .transform import (
    Spectrum,
    analyze_scaled,
    ffbt,
    ffbt_block,
    iffbt,
    iffbt_trace,
    steer_residual,
)

__version__ = "0.1.0"
