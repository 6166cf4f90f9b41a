"""Binary phase-shift pattern design for structured-light scanning.

Generate contone phase-measuring-profilometry patterns, binarize them with
classic halftoning or phase-weighted direct binary search, simulate projector
defocus and decode the per-pixel phase.
"""

from ._backend import NAME as backend
from .decode import (dft, dft_pixelwise, gradient_map, idft, magnitude_map, phase_map,
                     residual_power, wrapped_abs_error)
from .halftone import DbsConfig, bayer_dither, dbs_error, spatial_dbs, white_noise_dither
from .optics import Kernel, convolve_toroidal, defocus_set, gaussian_kernel, split_center
from .patterns import (PatternSet, PatternSpec, ideal_phase, make_dual_freq, make_patterns,
                       make_single_freq)
from .phase_dbs import (OptimizeConfig, best_binary_exhaustive, best_binary_threshold, optimize,
                        spectral_difference, surround_vector)

__version__ = "0.1.0"
