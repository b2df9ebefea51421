"""
Configuration module for the GHZ network nonlocality toolkit
"""
