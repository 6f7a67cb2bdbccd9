"""The exact extremal profile on the truncated simplex.

Run with:  python3 demos/02_extremal_profile.py
"""
from fractions import Fraction

from blowup_extremal import build_profile, compute_constants, ode_residual
from blowup_extremal.extremal import scalar_target

n, eps = 3, Fraction(1, 100)
c = compute_constants(n, eps)
print(f"n={n}, eps={eps}")
for name in ("alpha", "beta", "gamma", "delta"):
    v = getattr(c, name)
    print(f"  {name:<5} = {float(v): .10f}   ({v})")

p = build_profile(n, eps)
print("\nQ has degree", p.Q.degree)
print("  Q(eps)  =", p.Q(eps), "  Q'(eps) =", p.Q.derivative()(eps), "=", eps ** (n - 2) * (1 - eps))
print("  Q(1)    =", p.Q(1), "  Q'(1)   =", p.Q.derivative()(1), "  Q''(1) =", p.Q.derivative().derivative()(1))
print("  residue of h'' at eps:", p.residue_at_eps())

print("\nODE residual is the zero rational function:", ode_residual(p).is_zero())

# S is affine in the momenta: S = -gamma*rho - delta, so it interpolates
# between these two values across the polytope.
print("S at rho=eps:", float(scalar_target(p, eps)), "  S at rho=1:", float(scalar_target(p, 1)))

# How far the constants sit from the Fubini-Study values as eps shrinks.
# At n=3 the gap closes linearly in eps, from n=4 on quadratically.
print("\n|delta + n(n+1)| as eps halves")
for nn in (3, 4, 5):
    row = []
    for k in range(4):
        e = Fraction(1, 10 * 2**k)
        row.append(float(abs(compute_constants(nn, e).delta + nn * (nn + 1))))
    print(f"  n={nn}: " + "  ".join(f"{v:.3e}" for v in row))
