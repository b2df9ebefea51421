"""Count datasets, their file formats and bundled fixtures."""
