"""Transient/oscillation separation, band-energy mapping and pipeline cost model."""

from ._gammasep import (
    NoDetectionError,
    available_wavelets,
    detect_buildup,
    iswt,
    mask_geometry,
    separate,
    simulate,
    spatiotemporal_map,
    swt,
    tick_ratio,
)

__all__ = [
    "NoDetectionError",
    "available_wavelets",
    "detect_buildup",
    "iswt",
    "mask_geometry",
    "separate",
    "simulate",
    "spatiotemporal_map",
    "swt",
    "tick_ratio",
]
