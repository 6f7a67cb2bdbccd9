"""Scan eps in (0, 1) for regularity of the extremal profile.

Every eps is certified exactly (Sturm positivity of Q plus the boundary
identities), with a numeric Hessian sample on top.

Run with:  python3 demos/04_epsilon0_scan.py
"""
import time
from fractions import Fraction

from blowup_extremal import epsilon0_search, verify_regularity
from blowup_extremal.regularity import construction_singularities

rep = verify_regularity(3, Fraction(1, 100))
for name, chk in rep.checks.items():
    print(f"  {name:<12} {'ok' if chk.passed else 'FAIL'}")

print("\nroots of the constant denominators in [0, 1]:", construction_singularities(3))
print("(the only root is eps = 1, outside the parameter range)")

for n in (3, 4, 5):
    t = time.perf_counter()
    b = epsilon0_search(n, Fraction(1, 20), 10)
    d = b.as_dict()
    print(f"\nn={n}: verdict {d['verdict']}, last pass {d['last_pass']}, "
          f"first fail {d['first_fail']}, anomalies {len(b.anomalies)}  [{time.perf_counter() - t:.1f} s]")
