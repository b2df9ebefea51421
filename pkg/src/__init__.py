"""
GHZ Network Nonlocality Toolkit - Main Package
"""

__version__ = "1.0.1"
__author__ = "Network Nonlocality Team"
