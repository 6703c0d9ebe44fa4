"""
toeplab - Toeplitz operators with quasi-homogeneous symbols on projective space

A numerical laboratory featuring:
- Weighted Bergman spaces of polynomials in the affine chart of Pn(C)
- Spectral assembly of quasi-radial and quasi-homogeneous Toeplitz operators
- Independent brute-force oracle (separated and Monte-Carlo)
- Commutativity predictions and R_k(h) algebra checks
- Torus actions, principal bundle and Lagrangian frame geometry
"""

__version__ = "0.1.0"
__author__ = "toeplab developers"
