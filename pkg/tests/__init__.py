"""Tests for the tree spectra toolkit."""
