"""From a model to its moduli space: verdict, kind, dimension, Kahler
class, volume, and total scalar curvature -- all exact.

Run:  python demos/04_moduli_and_volumes.py
"""

from fractions import Fraction

from vortexmoduli import (
    AbelianVariety,
    AbelianVarietyData,
    Degree,
    DeltaVector,
    GlsmModel,
    ProjectiveSpace,
    WeightSystem,
    build_moduli,
    kahler_class,
    strong_coupling_limit,
    total_scalar_curvature,
    volume_moduli,
    vortex_energy,
)

# Degree-3 bundle on the projective line: the moduli space of triples of
# zeros, a projective 3-space.
line_model = GlsmModel.from_principal(
    ProjectiveSpace(1), WeightSystem.from_rows([[1]]), [100], 1, [Degree(3)]
)
desc = build_moduli(line_model)
print("line, degree 3:", desc.verdict.value, desc.kind, "dim", desc.complex_dimension)
print("  energy        =", vortex_energy(line_model))
print("  Kahler class  = (", kahler_class(line_model).eta_coefficients[0], ") * eta")
print("  volume        =", volume_moduli(line_model))
print("  total curv.   =", total_scalar_curvature(line_model))

# A positive bundle on an abelian surface: the moduli space fibres over
# the dual torus with projective fibres of rank = product of deltas.
av = AbelianVarietyData.of([2, 4], [1, 1])
surface_model = GlsmModel.from_principal(
    AbelianVariety(av), WeightSystem.from_rows([[1]]), [100], 1, [DeltaVector((2, 4))]
)
desc = build_moduli(surface_model)
print("\nabelian surface, deltas (2,4):", desc.kind, "dim", desc.complex_dimension)
report = kahler_class(surface_model)
print("  eta coefficient :", report.eta_coefficients[0])
print("  base correction :", report.base_correction)
volume = volume_moduli(surface_model)
print("  volume approx   :", volume.approx(12))

# Decoupling limit: sigma degenerates to tau Vol(M), corrections drop.
print("\nvolume in the decoupling limit:",
      strong_coupling_limit(surface_model, "volume").approx(12))
