"""Tests for gcirc."""
