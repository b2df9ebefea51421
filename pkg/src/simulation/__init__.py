"""Event-level simulation of the triggered GHZ experiment."""
