"""Noncoherent LDPC-coded physical-layer network coding over M-ary FSK."""

__version__ = "0.1.0"
