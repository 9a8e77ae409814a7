"""Computational toolkit for flat matrix models of the quantum permutation
group: magic bases, free orbitals, exact low-degree Haar values and Cesaro
convolution probes of inner faithfulness."""

from . import convolution_probe, errors, flat_model, haar_exact, magic_bases

__version__ = "0.1.0"

__all__ = [
    "convolution_probe",
    "errors",
    "flat_model",
    "haar_exact",
    "magic_bases",
    "__version__",
]
