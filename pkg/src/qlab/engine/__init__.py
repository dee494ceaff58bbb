"""Exact case-elimination engine: symbolic layer, configurations, obstruction
operations, scripted case trees, and replayable certificates."""

from .symbolic import AlgebraicPoint, MPoly, MRat, Rad, SignUndecided, mgcd, sign_over_domain
