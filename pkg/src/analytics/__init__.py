"""Inequality, bounds, bootstrap statistics, tomography and the fidelity witness."""
