"""Independent reference computations used to pin expected values.

Everything here deliberately avoids the package's own finite-difference +
Richardson + LAPACK path:

* `shooting_mu` integrates the half-line well with an adaptive Runge-Kutta
  integrator, launched from the decaying tail, and finds the eigenvalue as the
  root of the Neumann defect u'(0).
* `sturm_count` is a plain-Python Sturm-sequence eigenvalue counter for
  symmetric tridiagonal matrices.
* `rotation_alignment_norm` builds the minimal rotation between two unit
  vectors explicitly and returns ||R - I|| from its SVD.

Run as a script to print the frozen reference values.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


def shooting_mu(tau: float, length: float = 14.0, rtol: float = 1e-11) -> float:
    """Ground eigenvalue of -u'' + (tau+z)^2 u, Neumann at 0, by shooting.

    Integrates backward from z=length with the WKB-decaying initial slope so
    the wanted solution grows in the direction of integration (stable), then
    brackets the lowest root of u'(0).
    """

    def defect(lam: float) -> float:
        def rhs(z, y):
            return [y[1], ((tau + z) ** 2 - lam) * y[0]]

        u_end = 1e-280
        slope = -np.sqrt(max((tau + length) ** 2 - lam, 1.0)) * u_end
        sol = solve_ivp(rhs, [length, 0.0], [u_end, slope],
                        rtol=rtol, atol=1e-300, dense_output=False)
        u0, du0 = sol.y[0, -1], sol.y[1, -1]
        return du0 / max(abs(u0), 1e-300)

    # The ground state of the half-line well lies in (0, 1 + tau^2-ish); scan
    # for the first sign change of the Neumann defect.
    grid = np.linspace(0.05, 1.6, 63)
    vals = [defect(g) for g in grid]
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0.0:
            return float(a)
        if fa * fb < 0:
            return float(brentq(defect, a, b, xtol=1e-12, rtol=1e-14))
    raise RuntimeError("no Neumann root bracketed; widen the scan")


def sturm_count(diag: np.ndarray, off: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below x."""
    count = 0
    q = diag[0] - x
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        denom = q if q != 0.0 else 1e-300
        q = diag[i] - x - off[i - 1] ** 2 / denom
        if q < 0:
            count += 1
    return count


def rotation_alignment_norm(u: np.ndarray, v: np.ndarray) -> float:
    """||R - I||_2 for the minimal rotation taking unit vector u onto v."""
    u = np.asarray(u, dtype=float) / np.linalg.norm(u)
    v = np.asarray(v, dtype=float) / np.linalg.norm(v)
    w = np.cross(u, v)
    s = np.linalg.norm(w)
    c = float(np.dot(u, v))
    if s < 1e-300:
        if c > 0:
            return 0.0
        return 2.0  # antipodal: any half-turn, ||R - I|| = 2
    k = w / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    rot = np.eye(3) + s * kx + (1 - c) * (kx @ kx)
    return float(np.linalg.svd(rot - np.eye(3), compute_uv=False)[0])


if __name__ == "__main__":
    print("shooting mu(-2)  =", repr(shooting_mu(-2.0)))
    print("shooting mu(0)   =", repr(shooting_mu(0.0)))
    print("shooting mu(-0.7681)  =", repr(shooting_mu(-0.7681)))
    rng = np.random.default_rng(7)
    for _ in range(3):
        a = rng.normal(size=3)
        b = rng.normal(size=3)
        phi = np.arccos(np.clip(np.dot(a, b) / np.linalg.norm(a) / np.linalg.norm(b), -1, 1))
        print("||R-I|| =", rotation_alignment_norm(a, b),
              " 2 sin(phi/2) =", 2 * np.sin(phi / 2))
