"""bohmlib: Bohmian hydrodynamics of one-dimensional wavefunctions."""
__version__ = "0.1.0"
