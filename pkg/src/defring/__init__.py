"""Universal deformation rings of residually reducible representations from pro-p presentations."""

__version__ = "0.1.0"
