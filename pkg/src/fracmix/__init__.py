"""Exact boundedness criteria and numerical probes for multilinear fractional integrals on mixed-norm spaces."""

__version__ = "0.1.0"
