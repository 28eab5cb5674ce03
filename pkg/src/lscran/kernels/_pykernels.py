"""numpy versions of the compiled pathloss sums."""

import numpy as np

_CHUNK = 1 << 20


def pathloss_sum(points, x0, y0, alpha):
    p = np.asarray(points, dtype=float)
    d2 = (p[:, 0] - x0) ** 2 + (p[:, 1] - y0) ** 2
    return float(np.sum(d2 ** (-0.5 * alpha)))


def pair_pathloss_sums(phi, psi, x0, y0, alpha0, alpha1, radius):
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    r2 = radius * radius
    d0 = (phi[:, 0] - x0) ** 2 + (phi[:, 1] - y0) ** 2
    w0 = d0 ** (-0.5 * alpha0)
    near = d0 <= r2
    outside = inside = 0.0
    step = max(1, _CHUNK // max(len(phi), 1))
    for s in range(0, len(psi), step):
        q = psi[s:s + step]
        d1 = (phi[None, :, 0] - q[:, None, 0]) ** 2 + (phi[None, :, 1] - q[:, None, 1]) ** 2
        t = w0[None, :] * d1 ** (-0.5 * alpha1)
        inside += float(t[(d1 <= r2) & near[None, :]].sum())
        outside += float(t[(d1 > r2) & ~near[None, :]].sum())
    return outside, inside
