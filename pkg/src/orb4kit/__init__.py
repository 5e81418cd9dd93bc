"""Invariants of compact 4-orbifolds with circle actions.

Submodules:
  algebra   finitely generated abelian groups, (co)homology tables
  wps       weighted projective planes CP^2[l0, l1, l2]
  quotgeo   orbit metrics on S^3 / S^1_{k,l} and comparison angles
  hitchin   the traceless symmetric matrix model of S^4
  cli       the ``orb4kit`` command
"""

__version__ = "0.1.0"
