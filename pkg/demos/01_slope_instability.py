"""Slope instability of the blowup of P^n along a line, for every polarization.

Run with:  python3 demos/01_slope_instability.py
"""
from fractions import Fraction

from blowup_extremal import certify_slope_instability, slope_report
from blowup_extremal.stability import margin_numerator_poly

# One polarization first: n = 3, eps = 1/2.
r = slope_report(3, Fraction(1, 2))
print("n=3, eps=1/2")
print("  slope mu            =", r.mu)
print("  quotient slope      =", r.mu_seshadri, "at c = Sesh(E) =", r.seshadri)
print("  mu_c - mu           =", r.margin, "(negative: destabilizing)")

# A few eps values, exact throughout.
print("\nn=4 over a coarse grid")
for k in range(1, 6):
    e = Fraction(k, 6)
    rr = slope_report(4, e)
    print(f"  eps={str(e):>4}  mu={float(rr.mu):9.5f}  mu_sesh={float(rr.mu_seshadri):9.5f}  unstable={rr.unstable}")

# The grid proves nothing on its own. The certificate decides the sign of the
# margin numerator on all of (0, 1) with a Sturm chain.
p = margin_numerator_poly(3)
print("\nmargin numerator for n=3, degree", p.degree)
print("  coefficients (low to high):", ", ".join(p.to_strings()))

for n in range(3, 11):
    c = certify_slope_instability(n)
    s = c.sign.as_dict()
    print(f"  n={n:2d}  {s['kind']:<18} interior roots={s['interior_roots']}  valid={c.valid}")
