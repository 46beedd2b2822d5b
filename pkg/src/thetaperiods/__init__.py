"""Exact period tensors of Hecke eigenforms on Gamma_0(N) from a theta-function generating series.

Modules, roughly bottom-up: exactnum (Q and Q(sqrt D) scalars), qseries,
polyslash (period polynomials and the slash action), thetafun, eisenstein,
genfun (the generating series and its eigencomponents), extract (eigenforms and
tensors from cusp slices), lfactors (local Euler factors) and cli.
"""

__version__ = "0.1.0"
