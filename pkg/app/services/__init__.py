"""
Services package.

This package contains service modules that provide the numerical functionality
of the recovery pipeline.

Available services:
- index_sets: Hyperbolic cross enumeration
- bases: Chebyshev and half-period cosine bases, design matrices
- sampling: Seeded random nodes and the oversampled budget
- subsampling: Barrier subsampling of frames and frame bounds
- recovery: Least-squares fits and L2 errors
- reference_problems: The B-spline test function and its exact coefficients
- experiments: Frame-bound demonstration, error sweeps and rate fits
- storage: CSV and JSON files used by the command-line interface
"""
