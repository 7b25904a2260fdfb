"""Tests for kmscurves."""
