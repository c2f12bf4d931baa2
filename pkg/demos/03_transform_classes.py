"""Characteristic classes of the transform of a positive bundle on an
abelian variety, computed in an exterior-algebra model of the dual
torus.  Two independent derivations of the total Chern class are kept as
mutual oracles, and the Segre class inverts it exactly.

Run:  python demos/03_transform_classes.py
"""

from vortexmoduli import (
    AbelianVarietyData,
    ch_transform,
    chern_closed_form,
    chern_from_character,
    fm_kahler_power,
    r_sections_abelian,
    recursion_check,
    segre,
)

av = AbelianVarietyData.of([2, 3], [1, 1])
print("abelian surface with deltas (2,3); rank of transform:", r_sections_abelian(av))

ch = ch_transform(av)
print("\nChern character:", ch)

c_direct = chern_from_character(ch)
c_closed = chern_closed_form(av)
print("\ntotal Chern class:", c_direct)
print("two derivations agree:", c_direct == c_closed)

s = segre(c_direct)
print("\nSegre class:", s)
print("s * c == 1:", s * c_direct == c_direct.presentation.one())

print("\ncharacter recursion ch_2 = ch_1^2 / (2 r):", recursion_check(av, 2))

transform = fm_kahler_power(av)
print("\ntransform of the Kahler power (degree-2 class on the dual torus):")
print("  ", transform)
