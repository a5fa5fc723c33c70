"""Capacity regions, simulation and gap analysis for the two-user
interference channel with rate-limited feedback."""

__version__ = "0.1.0"
