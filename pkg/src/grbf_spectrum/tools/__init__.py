"""Subcommand entry points for grbf-spectrum."""
