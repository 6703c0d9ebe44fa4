"""Core configuration, errors, logging and random streams."""
