"""Finite Fourier series and FFT-based convolutions on Z^2\\SE(2)."""

__version__ = "0.1.0"
