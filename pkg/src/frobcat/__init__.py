"""Frobenius algebras in skeletal ribbon categories."""
__version__ = "0.1.0"
