"""Disorder-averaged dynamics generated by potent Hamiltonians."""

from .disorder import Distribution, gaussian, uniform
from .hamiltonians import PotentHamiltonian, build_clock_qutrit, build_qubit, build_spin1
from .maps import DynamicalMap, build_map, evolve, map_closed_form, map_quadrature, map_series

__version__ = "0.1.0"

__all__ = [
    "Distribution",
    "DynamicalMap",
    "PotentHamiltonian",
    "build_clock_qutrit",
    "build_map",
    "build_qubit",
    "build_spin1",
    "evolve",
    "gaussian",
    "map_closed_form",
    "map_quadrature",
    "map_series",
    "uniform",
]
