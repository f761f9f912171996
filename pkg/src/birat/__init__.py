"""Geiser and Bertini involutions on low-degree del Pezzo surfaces and the
factorization of birational selfmaps of cubic surfaces."""

__version__ = "0.1.0"
