# tests/__init__.py
"""
Unit tests for the GIBO benchmark suite.
"""
