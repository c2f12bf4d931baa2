"""Every scalar in this package is a polynomial in pi with rational
coefficients.  Because pi is transcendental, such values admit exact
equality and a decidable sign: evaluate on a certified rational interval
around pi and refine until zero is excluded.

Run:  python demos/01_exact_pi_arithmetic.py
"""

from fractions import Fraction

from vortexmoduli import PI, PiPoly, pp_approx, pp_sign

sigma = PiPoly([2, -2])  # 2 - 2 pi, a typical stability parameter
print("sigma              =", sigma)
print("sign(sigma)        =", pp_sign(sigma).name)
print("sigma to 12 digits =", pp_approx(sigma, 12))

# Arithmetic is plain operator syntax and stays exact.
volume = (PI * sigma) ** 3 * Fraction(1, 6)
print("\n(pi sigma)^3 / 3!  =", volume)
print("approx             =", pp_approx(volume, 12))

# A notoriously tight call: 355/113 exceeds pi by about 2.7e-7.
close = PiPoly([Fraction(355, 113), -1])
print("\n355/113 - pi sign  =", pp_sign(close).name)

# Structural equality: cancellation is recognised exactly.
left = (1 + PI) * (1 - PI)
right = 1 - PI * PI
print("\n(1+pi)(1-pi) == 1 - pi^2:", left == right)
