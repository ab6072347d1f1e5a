"""Chebyshev subsampling recovery service."""
