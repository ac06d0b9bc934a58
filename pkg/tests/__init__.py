"""Test package for hypercop."""
