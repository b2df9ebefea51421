"""Report documents and text tables."""
