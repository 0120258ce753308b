"""Exact branch-and-bound over exponent pairs."""
