"""Independent 30-digit oracle: Hamiltonian from the biorthonormal frame by mpmath differentiation.

Run directly to print the values frozen in the test suite.
"""

import mpmath as mp

mp.mp.dps = 30


def frame(theta, phi):
    c, s = mp.cos(theta / 2), mp.sin(theta / 2)
    e = mp.exp(1j * phi)
    plus = mp.matrix([c, s * e])
    minus = mp.matrix([-s / e, c])
    return plus, minus


def left(theta, phi):
    return frame(mp.conj(theta), mp.conj(phi))


def hamiltonian(theta_of_t, phi_of_t, t):
    th, ph = theta_of_t(t), phi_of_t(t)
    right = frame(th, ph)
    lefts = left(th, ph)
    h = mp.zeros(2, 2)
    for m in range(2):
        rdot = mp.matrix([mp.diff(lambda x: frame(theta_of_t(x), phi_of_t(x))[m][k], t) for k in range(2)])
        lt = lefts[m]
        adot = mp.re(sum(mp.conj(lt[k]) * 1j * rdot[k] for k in range(2)))
        col = 1j * rdot - adot * right[m]
        for i in range(2):
            for j in range(2):
                h[i, j] += col[i] * mp.conj(lt[j])
    return h


def complex_circle(theta0, beta, gamma, T=1):
    th = lambda t: theta0 + 1j * beta * mp.sin(mp.pi * t / T) ** 2
    ph = lambda t: 2 * mp.pi * t / T + 1j * gamma * mp.sin(mp.pi * t / T) ** 2
    return th, ph


if __name__ == "__main__":
    th, ph = complex_circle(mp.pi / 2, mp.mpf("0.1"), mp.mpf("0.05"))
    for t in ("0.3", "0.5"):
        h = hamiltonian(th, ph, mp.mpf(t))
        print(t, [[complex(h[i, j]) for j in range(2)] for i in range(2)])
