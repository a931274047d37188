"""Exact verification of lightlike submanifolds in golden semi-Riemannian
product spaces.

The pipeline runs from the scalar field up: :mod:`scalar` (exact numbers in
Q(sqrt2, sqrt5)), :mod:`bilinear` (forms and subspaces), :mod:`golden`
(product and golden structures), :mod:`lightlike` (the four-block
decomposition), :mod:`stclass` (screen-transversal classes),
:mod:`connection` (Gauss-Weingarten forms and theorem conditions) and
:mod:`cli` (scenarios and reports).
"""

from .scalar import ExtScalar, R2, R5, R10, PHI
from .report import run_scenario, emit_report

__all__ = ["ExtScalar", "R2", "R5", "R10", "PHI", "run_scenario", "emit_report"]
__version__ = "0.1.0"
