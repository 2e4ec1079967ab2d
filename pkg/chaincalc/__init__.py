# chaincalc package initialization
"""Exact arc-chain calculus, arc generators and a finite-stage curve construction."""

__version__ = "0.1.0"

from .errors import ChainCalcError  # noqa: F401
