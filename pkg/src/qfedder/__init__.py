"""Fedder-type criteria for F-purity, quasi-F^e-splitting and quasi-F-regularity."""
from .config import RingConfig
from .criteria import (
    fedder_fpure,
    necessary_qf2_nonFpure,
    necessary_qfe,
    qfs_height,
    sufficient_qfe,
    sufficient_qfr,
)
from .modpoly import ModPoly
from .parser import format_poly, parse_poly
from .report import Kind, Soundness, Verdict, emit_report

__all__ = [
    "RingConfig", "ModPoly", "parse_poly", "format_poly", "Verdict", "Kind", "Soundness", "emit_report",
    "fedder_fpure", "necessary_qfe", "necessary_qf2_nonFpure", "qfs_height", "sufficient_qfe", "sufficient_qfr",
]
