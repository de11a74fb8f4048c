# src/acquisition/__init__.py
"""
Acquisition functions for active gradient estimation.
"""

from .gradient_information import (
    GIContext,
    gi_gain,
    gi_value,
    gi_value_and_gradient,
    maximize_gi,
)

__all__ = ["GIContext", "gi_gain", "gi_value", "gi_value_and_gradient", "maximize_gi"]
