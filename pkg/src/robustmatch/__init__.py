"""Fully robust stable matchings via rotation-poset compressions."""

__version__ = "0.1.0"
