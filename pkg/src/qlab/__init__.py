"""qlab: a verification laboratory for real hypersurfaces of the complex quadric."""

__version__ = "0.1.0"
