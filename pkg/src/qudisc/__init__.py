"""Exact error rates for programmable two-template qubit discrimination.

The package computes, for any training-set size, the minimal misclassification
probability of the optimal universal discrimination machine: a device holding
two ensembles of template qubits and one test qubit, asked which template the
test qubit was drawn from.  Prior information enters through one of three
scenarios (known purities, hard-sphere-averaged purities, or pure templates
with known overlap), and every exact number is cross-checkable against a dense
brute-force oracle, closed-form asymptotics, and a sampled simulation of the
smallest machine.
"""

from .priors import (
    FixedOverlap,
    FixedOverlapDim,
    FixedPurities,
    HardSphere,
    LogWeight,
    Scenario,
)
from .spectrum import ErrorReport, p_err_min, spectrum_report

__all__ = [
    "ErrorReport",
    "FixedOverlap",
    "FixedOverlapDim",
    "FixedPurities",
    "HardSphere",
    "LogWeight",
    "Scenario",
    "p_err_min",
    "spectrum_report",
]

__version__ = "0.1.0"
