"""Abreu's formula by finite differences against the closed-form curvature.

Run with:  python3 demos/03_scalar_curvature.py
"""
from fractions import Fraction

import numpy as np

from blowup_extremal import PotentialModel, abreu_scalar_fd
from blowup_extremal.toric import closed_form_scalar, det_closed, det_closed_as_published, hessian_s, interior_grid

# Sanity check on the simplex with its canonical potential: S = n(n+1).
for n in (1, 2, 3, 4):
    fs = PotentialModel.guillemin(n)
    x = np.full(n, 1 / (n + 2))
    print(f"simplex n={n}: S_fd = {abreu_scalar_fd(fs, x):.8f}   n(n+1) = {n * (n + 1)}")

eps = Fraction(1, 100)
model = PotentialModel.extremal(3, eps)
pts = interior_grid(3, eps, 5, margin=0.05)
errs, eigs, det_err, det_err_pub = [], [], [], []
for x in pts:
    exact = float(closed_form_scalar(model, Fraction(float(x[:-1].sum()))))
    errs.append(abs(abreu_scalar_fd(model, x) - exact))
    H = hessian_s(model, x)
    eigs.append(np.linalg.eigvalsh(H).min())
    d = np.linalg.det(H)
    det_err.append(abs(d - det_closed(model, x)) / d)
    det_err_pub.append(abs(d - det_closed_as_published(model, x)) / d)

print(f"\nextremal n=3, eps={eps}, {len(pts)} grid points")
print(f"  max |S_fd - S_exact|          = {max(errs):.2e}")
print(f"  smallest Hessian eigenvalue    = {min(eigs):.4f}")
print(f"  det vs 1 + rho(1-rho)h'' form  = {max(det_err):.1e} (relative)")
print(f"  det vs (1+h'')(1-rho)+rho form = {min(det_err_pub):.1e} .. {max(det_err_pub):.2f}")
