"""Polarization optics of the measurement stations."""
