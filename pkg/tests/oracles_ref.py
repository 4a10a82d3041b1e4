"""Reference values computed by deliberately different means than the package.

Quadrature instead of Monte Carlo, a from-scratch word mixer instead of the
kernel one, brute-force polynomial loops instead of the flattened evaluator,
a dense numpy scan instead of the pattern search. test_oracles.py pins each
of these against closed forms before any other module trusts them.
"""

import math

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

TWO_SQRT_TWO = 2.8284271247461903


def ref_mix64(x: int) -> int:
    x &= MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


def ref_stream_word(seed: int, i: int, j: int) -> int:
    x = ref_mix64((seed + GOLDEN) & MASK)
    x = ref_mix64((x + (i + 1) * GOLDEN) & MASK)
    return ref_mix64((x + (j + 1) * GOLDEN) & MASK)


def ref_uniform01(seed: int, i: int, j: int) -> float:
    return (ref_stream_word(seed, i, j) >> 11) * 2.0 ** -53


def ref_sphere_point(seed: int, i: int) -> tuple:
    z = 2.0 * ref_uniform01(seed, i, 0) - 1.0
    phi = 2.0 * math.pi * ref_uniform01(seed, i, 1)
    s = math.sqrt(1.0 - z * z)
    return (s * math.cos(phi), s * math.sin(phi), z)


def ref_cube_point(seed: int, i: int, dim: int) -> tuple:
    return tuple(ref_uniform01(seed, i, j) for j in range(dim))


def sphere_second_moment(r: int, s: int, nodes: int = 64, n_phi: int = 256) -> float:
    """E[lam_r lam_s] over the uniform sphere, Gauss-Legendre in z times a
    trapezoid rule in the azimuth (spectrally accurate on the periodic
    factor). Indices are 0..2 for x, y, z."""
    z, w = np.polynomial.legendre.leggauss(nodes)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    comps = [
        np.outer(rho, np.cos(phi)),
        np.outer(rho, np.sin(phi)),
        np.outer(z, np.ones(n_phi)),
    ]
    vals = comps[r] * comps[s]
    return float(np.sum(w[:, None] * vals) / (2.0 * n_phi))


def sign_curve_quad(theta: float, nodes: int = 200) -> float:
    """E[sign(a.lam) * (-sign(b.lam))] for a on the z-axis and b tilted by
    theta in the x-z plane, by quadrature.

    The azimuth average of sign(v cos(phi) + u) is 2 acos(clip(-u/v)) / pi - 1,
    leaving a 1-D polar integral with kinks at z = 0 and |z| = sin(theta);
    splitting at the kinks makes plain Gauss-Legendre converge fast.
    """
    st, ct = math.sin(theta), math.cos(theta)
    cuts = sorted({-1.0, -abs(st), 0.0, abs(st), 1.0})
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        z = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        v = st * np.sqrt(np.maximum(1.0 - z * z, 0.0))
        u = ct * z
        safe = np.where(v > 0.0, v, 1.0)
        az = np.where(
            v > 0.0,
            2.0 * np.arccos(np.clip(-u / safe, -1.0, 1.0)) / math.pi - 1.0,
            np.where(u >= 0.0, 1.0, -1.0),
        )
        sz = np.where(z >= 0.0, 1.0, -1.0)
        total += 0.5 * (hi - lo) * float(np.sum(w * sz * (-az)))
    return 0.5 * total


def linear_joint_quad(a, b, nodes: int = 64, n_phi: int = 256) -> tuple:
    """(pp, mm, pm, mp) for outcome probabilities (1 + a.lam)/2 on one side
    and (1 - b.lam)/2 on the other, integrated over the sphere."""
    z, w = np.polynomial.legendre.leggauss(nodes)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    lx = np.outer(rho, np.cos(phi))
    ly = np.outer(rho, np.sin(phi))
    lz = np.outer(z, np.ones(n_phi))
    da = a[0] * lx + a[1] * ly + a[2] * lz
    db = b[0] * lx + b[1] * ly + b[2] * lz
    p1p, p1m = (1.0 + da) / 2.0, (1.0 - da) / 2.0
    p2p, p2m = (1.0 - db) / 2.0, (1.0 + db) / 2.0

    def avg(grid):
        return float(np.sum(w[:, None] * grid) / (2.0 * n_phi))

    return (avg(p1p * p2p), avg(p1m * p2m), avg(p1p * p2m), avg(p1m * p2p))


def series_brute(table, constant: float, a, b) -> float:
    """Brute-force series value: different loop order, ** powers, fsum."""
    table = np.asarray(table)
    degree = table.shape[0]
    terms = [constant]
    for r in range(3):
        for s in range(3):
            for i in range(1, degree + 1):
                for j in range(1, degree + 1):
                    terms.append(table[i - 1, j - 1, r, s] * a[r] ** i * b[s] ** j)
    return math.fsum(terms)


def chsh_scan_coplanar(grid: int = 720) -> float:
    """Dense independent scan of the four-correlation sum for P = -cos."""
    t = 2.0 * math.pi * np.arange(grid) / grid
    C = -np.cos(np.subtract.outer(t, t))
    best = 0.0
    for jb in range(grid):
        col_b = C[:, jb]
        for jbp in range(grid):
            col_bp = C[:, jbp]
            s = np.max(np.abs(col_b - col_bp)) + np.max(col_bp + col_b)
            if s > best:
                best = s
    return float(best)


def pq_axis_curve(x: float) -> float:
    """Singlet correlation at (z, infinity) restricted to the real axis."""
    return (1.0 - x * x) / (1.0 + x * x)
