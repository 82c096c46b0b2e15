"""Small-Hilbert-space numerics for Bell, GHZ, Hardy, contextuality, decoherence and history arguments."""

from .linalg import DensityOp, StateVector, partial_trace, tensor

__all__ = ["DensityOp", "StateVector", "partial_trace", "tensor"]
__version__ = "0.1.0"
