"""Encoders, collective noise channels and certificates for small
noiseless-subsystem and decoherence-free-subspace codes."""

__version__ = "0.1.0"
