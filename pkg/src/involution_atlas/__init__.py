"""Exact involution counts, generating-function verification, asymptotic
limits and brute-force cross-validation for the finite orthogonal and
symplectic groups.

Modules: exact (rational arithmetic), orders (group orders), counts
(involution counts), qseries (identity checking), asymptotics (limits),
oracle (brute-force matrix groups), fixtures (frozen tables), cli.
"""

__version__ = "0.1.0"
