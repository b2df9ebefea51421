"""Space-time locality analysis of the measurement stations."""
