"""Spectral (Q-index) sufficient conditions for vertex connectivity, checked against ground truth."""

from .certify import Certificate, analyze, certify, exceptional_match
from .graph import FamilySpec, Graph, complement, construct, from_graph6, to_graph6
from .harness import enumerate_connected, margin_sweep, tightness, verify_rule, verify_rules
from .spectral import largest_real_root, q_index
from .structure import girth, vertex_connectivity
from .thresholds import RULES, ThresholdContext, threshold

__version__ = "0.1.0"

__all__ = [
    "Certificate", "FamilySpec", "Graph", "RULES", "ThresholdContext", "analyze", "certify", "complement",
    "construct", "enumerate_connected", "exceptional_match", "from_graph6", "girth", "largest_real_root",
    "margin_sweep", "q_index", "threshold", "tightness", "to_graph6", "verify_rule", "verify_rules",
    "vertex_connectivity",
]
