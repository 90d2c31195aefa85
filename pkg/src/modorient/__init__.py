"""Modulo-5 orientations of random 9-regular multigraphs.

Pairing-model sampling, orientation search and exact counting, exact
moment enumeration and the second-moment landscape analysis.
"""

__version__ = "0.1.0"
