"""Cremona Distortion - exact experiments on degrees, heights and distortion in Cremona groups."""

__version__ = "0.1.0"
