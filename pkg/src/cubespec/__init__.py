"""Exact specialness verification for branched-quotient square complexes.

The package has two independent verification routes and the machinery to
cross-check them against each other:

* a geometric route: build finite height-truncations of the quotient
  complex, compute hyperplanes by union-find, and check the four
  specialness conditions by brute force (``complex_model``,
  ``hyperplane_engine``);
* a symbolic route: enumerate the finitely many interaction
  configurations over residues and certify each empty with a linear
  character (``coeff_group``, ``verifier``).

``algebra_tools`` adds the exact integer linear algebra used for the
auxiliary computations (Smith Normal Form, abelianisation invariants,
orbit growth, torsion-sequence periodicity).
"""

from cubespec.coeff_group import GroupParams

__all__ = ["GroupParams"]
__version__ = "0.1.0"
