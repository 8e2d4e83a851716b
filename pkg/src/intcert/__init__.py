"""intcert: exact integrability certificates for planar polynomial systems."""

__version__ = "0.1.0"
