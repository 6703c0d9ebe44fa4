"""Command line, check runners and report writers."""
