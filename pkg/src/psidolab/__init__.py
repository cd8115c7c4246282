"""Numerical laboratory for tau-quantized pseudo-differential operators.

Everything lives on uniform periodic lattices: functions on X, X* and phase
space, Weyl operators, tau-quantization kernels, Kato averages, Schatten norms,
Bessel potentials and Fourier multipliers on product spaces.
"""

__version__ = "0.1.0"

from .errors import (DomainError, NonFiniteError, NumericalError, PreconditionError, PsidolabError, ResourceError,
                     ShapeError, TagError)
from .grid import (XSTAR, GridSpec, SampledFunction, SpaceTag, X, inner, lattice_coordinates, lp_norm, phase_tag,
                   sample)
from .fourier import (convolve, fourier_X, fourier_Xstar, inv_fourier_X, phase_multiplier, symplectic_form,
                      symplectic_fourier, twisted_convolution)
from .weyl import PhasePoint, composition_defect, matrix_coefficient, parseval_defect, weyl_apply, weyl_matrix
from .quantize import (OperatorKernel, QuantizationParams, compose_symbols, convert_tau, kernel_from_symbol,
                       symbol_from_kernel)
from .bessel import bessel_kernel, cordes_symbol, trace_class_probe
from .kato import abs_parts, dominance_defect, kato_average, synthesis_defect, translate_symbol
from .schatten import bound_report, schatten_norm, schatten_report, singular_values, tau_continuity_report
from .symclass import SeminormSpec, random_symbol, seminorm, sobolev_norm, bessel_smooth
from .multiplier import (MixedSymbolSpec, dyadic_decompose, envelope_check, inverse_transform_l1,
                         mixed_bessel_symbol, multiplier_bound_probe, tcp5_factor_check)

__all__ = [
    "__version__",
    "PsidolabError", "TagError", "ShapeError", "DomainError", "NonFiniteError", "PreconditionError",
    "ResourceError", "NumericalError",
    "GridSpec", "SpaceTag", "SampledFunction", "X", "XSTAR", "phase_tag", "sample", "lp_norm", "inner",
    "lattice_coordinates",
    "fourier_X", "fourier_Xstar", "inv_fourier_X", "symplectic_form", "symplectic_fourier", "phase_multiplier",
    "twisted_convolution", "convolve",
    "PhasePoint", "weyl_apply", "weyl_matrix", "composition_defect", "matrix_coefficient", "parseval_defect",
    "QuantizationParams", "OperatorKernel", "kernel_from_symbol", "symbol_from_kernel", "convert_tau",
    "compose_symbols",
    "bessel_kernel", "cordes_symbol", "trace_class_probe",
    "dominance_defect", "abs_parts", "translate_symbol", "kato_average", "synthesis_defect",
    "singular_values", "schatten_norm", "schatten_report", "bound_report", "tau_continuity_report",
    "SeminormSpec", "seminorm", "sobolev_norm", "bessel_smooth", "random_symbol",
    "MixedSymbolSpec", "mixed_bessel_symbol", "envelope_check", "dyadic_decompose", "inverse_transform_l1",
    "multiplier_bound_probe", "tcp5_factor_check",
]
