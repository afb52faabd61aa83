"""mforge: exact computations with matroids over finite fields.

Everything here is exact arithmetic at desk scale: GF(p^k) towers,
dense matrices with labelled columns, rank-oracle matroids, projective
and affine geometries, connectivity, subfield scaling certificates,
circuit-hyperplane relaxations and their non-representability
certificates, and the long-line witness extraction pipeline.
"""

__version__ = "0.1.0"
