"""Decision procedures for star-free closures of regular-language classes."""

__version__ = "0.1.0"
