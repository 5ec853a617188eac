"""Test package for local helper imports."""
