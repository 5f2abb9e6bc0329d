"""Independent reference values for the response integrals.

For Gaussian windows of width w the double integrals depend on the lag
only through the autocorrelation ``G(s) = w sqrt(pi/2) exp(-s^2/(2 w^2))``,
which reduces everything to 1-D integrals handled here by
``scipy.integrate.quad``.  The singular FF kernel is split as
``sinh^-2(z) = 1/z^2 + (sinh^-2(z) - 1/z^2)``; the pole part is taken in
its distributional form after integrating by parts twice.  Nothing from the
package is imported.

Running the module prints the constants frozen in the test suite.
"""
import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

SQ = math.sqrt(math.pi / 2)


def _smooth_part(x):
    if abs(x) < 1e-3:
        return -1 / 3 + x * x / 15
    if abs(x) > 300:
        return -1 / x ** 2
    return 1 / math.sinh(x) ** 2 - 1 / x ** 2


def inertial(E, w=1.0):
    G = lambda s: w * SQ * math.exp(-s * s / (2 * w * w))
    lim = -G(0) * (E * E + 1 / w ** 2) / 2
    tail = quad(lambda s: (G(s) * math.cos(E * s) - G(0)) / s ** 2 if s > 1e-8 else lim,
                0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    return math.pi * E * G(0) + 2 * tail


def images(E, a, w=1.0):
    G = lambda s: w * SQ * math.exp(-s * s / (2 * w * w))
    return quad(lambda u: G(u) * math.cos(E * u) * _smooth_part(a * u / 2),
                -np.inf, np.inf, limit=400, epsabs=1e-13, epsrel=1e-13)[0]


def ff(E, a, w=1.0):
    """Signed FF integral."""
    return 4 / a ** 2 * inertial(E, w) + images(E, a, w)


def ix_shifted(x, E=1.0, a=2.0):
    def part(fn):
        return quad(lambda u: SQ * math.exp(-(u - x) ** 2 / 2) * fn(E * u)
                    / math.cosh(min(a * u / 2, 300)) ** 2,
                    -40, 40, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    return abs(complex(part(math.cos), -part(math.sin)))


def crossing(E=1.0, a=2.0):
    ia = abs(ff(E, a))
    return brentq(lambda x: ix_shifted(x, E, a) - ia, 0.01, 3, xtol=1e-12)


if __name__ == "__main__":
    print("I_X(1,2)", repr(ix_shifted(0.0)))
    print("inertial(1)", repr(inertial(1.0)))
    print("images(1,2)", repr(images(1.0, 2.0)))
    for E in (0.5, 1.0, 2.0):
        for a in (1.0, 2.0, 4.0):
            print("ff", E, a, repr(ff(E, a)))
    print("x*", repr(crossing()))
    for w in (1, 2, 4):
        print("ratio", w, repr(ff(1.0, 2.0, w) / ff(-1.0, 2.0, w)))
