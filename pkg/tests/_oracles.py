"""Independent oracles used by the tests.

These recompute expected values by routes the library never takes:
arbitrary-precision tanh-sinh quadrature, direct series summation, and
closed-form distribution functions.  They live in the test surface only.
"""

import mpmath as mp

mp.mp.dps = 40


def threshold_integral(rho_th_sq, order):
    """High-precision quadrature of int_a^1 (1-u)^(order-2)/u du."""
    a = mp.mpf(rho_th_sq)
    if a == 1:
        return 0.0
    order = mp.mpf(order)
    f = lambda u: (1 - u) ** (order - 2) / u
    mid = min(2 * a, mp.mpf(1))
    return float(mp.quad(f, [a, mid, 1]))


def exp_integral_e1(x):
    """Quadrature of int_x^inf e^-t / t dt."""
    x = mp.mpf(x)
    return float(mp.quad(lambda t: mp.e**-t / t, [x, x + 50, mp.inf]))


def e1_series(x, terms=60):
    """Series identity E1(x) = -C - ln x + sum (-1)^(k+1) x^k / (k k!)."""
    x = mp.mpf(x)
    total = -mp.euler - mp.log(x)
    fact = mp.mpf(1)
    for k in range(1, terms + 1):
        fact *= k
        total += (-1) ** (k + 1) * x**k / (k * fact)
    return float(total)


def harmonic_digamma(n):
    """psi(n) for integer n >= 1 by direct harmonic summation."""
    return float(-mp.euler + mp.fsum(mp.mpf(1) / k for k in range(1, n)))


def beta_1_n_cdf(x, order):
    """CDF of Beta(1, order-1): 1 - (1-x)^(order-1)."""
    return 1.0 - (1.0 - x) ** (order - 1)


def p_tilde_lo(m, rho_th_sq, beta1, beta2, gamma1, gamma2):
    """Lower bound recomputed end to end in high precision."""
    a = mp.mpf(rho_th_sq)
    t0 = mp.mpf(gamma1) * (1 + mp.mpf(gamma2)) / ((m - 1) * mp.mpf(beta1))
    if a == 1:
        scaled = mp.mpf(1) / (m - 1)
    else:
        f = lambda u: (1 - u) ** (m - 2) / u
        integral = mp.quad(f, [a, min(2 * a, mp.mpf(1)), 1])
        scaled = integral / (1 - a) ** (m - 1)
    return float(t0 + mp.mpf(gamma2) / mp.mpf(beta2) * scaled)
