"""Exact-arithmetic toolkit for parabolic-type subalgebras of rank-two
lattice vertex operator algebras."""

__version__ = "0.1.0"
