"""Figures, tables and terminal charts."""
