"""Constructions and checks for (5,8)-colorings of complete graphs."""

__version__ = "0.1.0"

from .core import (
    DomainError,
    EdgeColoring,
    ParseError,
    find_violations,
    is_violation,
    load_coloring,
    q_lin,
    repetitions,
    save_coloring,
)
from .certificate import CertificateError, certify
from .gadget import ColoredGadget, PhaseAUniverse, VertexColor, enumerate_gadgets, is_valid
from .phase_a import PhaseAConfig, classify_conflict, run_phase_a
from .phase_b import PhaseBConfig, PhaseBFailure, assign_colors, build_lists
from .sfamily import UncoloredClasses, enumerate_S

__all__ = [
    "CertificateError", "ColoredGadget", "DomainError", "EdgeColoring", "ParseError",
    "PhaseAConfig", "PhaseAUniverse", "PhaseBConfig", "PhaseBFailure", "UncoloredClasses",
    "VertexColor", "assign_colors", "build_lists", "certify", "classify_conflict",
    "enumerate_S", "enumerate_gadgets", "find_violations", "is_valid", "is_violation",
    "load_coloring", "q_lin", "repetitions", "run_phase_a", "save_coloring",
]
