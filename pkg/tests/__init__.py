"""Tests for curvcones."""
