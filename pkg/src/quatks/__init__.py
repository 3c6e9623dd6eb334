"""Verification of the explicit Kodaira-Spencer constants over quaternionic Shimura curves."""

__version__ = "0.1.0"
