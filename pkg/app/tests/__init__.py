"""
Tests package.

This package contains test modules for various components of the application.
""" 