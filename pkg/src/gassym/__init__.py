"""Symbolic-numeric toolkit for the 12-dimensional symmetry Lie algebra
of gas dynamics with state equation P = f(rho) + S.

Modules:
  exprs     exact expression layer (canonical forms, zero tests, opaque f)
  liealg    structure constants, automorphisms, fingerprints
  fields    vector-field realizations on the 9-space and chart changes
  catalog   the four-dimensional subalgebra catalog and its verification
  classify  isomorphism-class assignments and fingerprint corroboration
  submodel  the rank-1/defect-1 submodel and its exact solution families
  numerics  RK4 trajectories, closed-form comparison, figure data
  cli       command-line verification campaigns
"""

__version__ = "0.1.0"
