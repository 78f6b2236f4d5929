"""Exact analysis of crystallographic space groups fibered over normal subgroups."""

__version__ = "0.1.0"
