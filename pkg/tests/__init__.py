"""Tests for the affine-amenability package."""
