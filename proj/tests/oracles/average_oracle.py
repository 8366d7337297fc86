"""Oracle for co_metric(A_r[h_0], h_inf) on the default exhaustion.

(h_0)_t = h_t and h_t - m = q/(t - m) with m = (z+w)/2, q = ((z-w)/2)^2,
so A_r[h_0] = m + q (log(r - m) - log(-r - m)) / (2r). The closed form is
cross-checked against scipy.integrate.quad at a few points.
"""
import numpy as np
from scipy.integrate import quad


def level(j, per_axis=5):
    re = np.linspace(-j, j, per_axis)
    im = np.linspace(1.0 / j, j, per_axis)
    axis = (re[:, None] + 1j * im[None, :]).ravel()
    z, w = np.meshgrid(axis, axis, indexing="ij")
    return z.ravel(), w.ravel()


def averaged_h0(z, w, r):
    m = (z + w) / 2
    q = ((z - w) / 2) ** 2
    return m + q * (np.log(r - m) - np.log(-r - m)) / (2 * r)


def quad_h0(z, w, r):
    m = (z + w) / 2
    q = ((z - w) / 2) ** 2
    f = lambda t: q / (t - m)
    re = quad(lambda t: f(t).real, -r, r, limit=2000, epsabs=1e-12, epsrel=1e-12, points=[m.real])[0]
    im = quad(lambda t: f(t).imag, -r, r, limit=2000, epsabs=1e-12, epsrel=1e-12, points=[m.real])[0]
    return m + (re + 1j * im) / (2 * r)


def co_metric(r):
    total = 0.0
    for j in range(1, 7):
        z, w = level(j)
        d = np.max(np.abs(averaged_h0(z, w, r) - (z + w) / 2))
        total += 2.0 ** -j * d / (1 + d)
    return total


if __name__ == "__main__":
    worst = 0.0
    for r in [10, 100, 1000]:
        for z, w in [(1j, 2j), (-3 + 0.2j, 4 + 1j), (5 + 6j, -6 + 1 / 6 * 1j)]:
            worst = max(worst, abs(averaged_h0(z, w, r) - quad_h0(z, w, r)))
    print(f"closed form vs quad: {worst:.3e}")
    for r in [10, 100, 1000]:
        print(f"r={r} co_metric={co_metric(r):.17g}")
    z, w = 1j, 2j
    print("A_100[h0](i,2i) =", repr(averaged_h0(z, w, 100)))
