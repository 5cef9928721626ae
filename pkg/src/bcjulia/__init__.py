"""Bicomplex polynomial dynamics."""
