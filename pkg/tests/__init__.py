"""Tests for rlihf-bench."""
