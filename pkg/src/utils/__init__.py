"""
Logger, error hierarchy and seeded batching
"""
