"""Command-line entry points, configuration, and artifact handling."""
