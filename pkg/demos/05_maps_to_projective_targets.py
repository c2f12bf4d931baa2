"""Holomorphic maps into a toric target embed into a vortex moduli
space.  Whether the embedding is open and dense is controlled by the
unstable coordinate planes of the target and the s-invariant; when it
is, the decoupling limit proposes an exact volume for the map space
(flagged conjectural).

Run:  python demos/05_maps_to_projective_targets.py
"""

from fractions import Fraction

from vortexmoduli import (
    ProjectiveSpace,
    ToricTarget,
    WeightSystem,
    embedding_open_dense,
    maps_volume_conjectural,
    s_invariant,
    unstable_planes,
)
from vortexmoduli.maps import bundle_data_for_degree

# Target: the projective plane as C^3 // U(1) with unit charges.
target = ToricTarget(WeightSystem.from_rows([[1, 1, 1]]), (Fraction(1),))
print("target dimension:", target.dimension())
print("unstable planes (allowed coordinate sets):",
      [sorted(p.allowed) for p in unstable_planes(target)])

for m in (1, 2, 3):
    base = ProjectiveSpace(m)
    data = bundle_data_for_degree(base, 2, target.n)
    dense = embedding_open_dense(target, base, data)
    print(f"maps from projective {m}-space: s = {s_invariant(target, data)},",
          f"open dense = {dense}")

# Degree-1 maps from the line to the line (n = 2): volume pi^3 / 6.
line_target = ToricTarget(WeightSystem.from_rows([[1, 1]]), (Fraction(1),))
volume = maps_volume_conjectural(line_target, ProjectiveSpace(1), 1, 1)
print("\nconjectural volume of degree-1 maps line -> line:", volume,
      "=", volume.approx(12))
