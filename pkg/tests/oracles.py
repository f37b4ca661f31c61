"""Reference computations that share no code with ``tbell``.

High-precision entropies via mpmath, classical joints via exact rational
enumeration over marked items, and the Grover iteration as explicit dense
matrices built from Kronecker products.
"""

from fractions import Fraction

import numpy as np
from mpmath import asin, cos, log, mp, mpf, sqrt

mp.dps = 40


def entropy_bits(probs):
    return float(-sum(mpf(p) * log(mpf(p), 2) for p in probs if p))


def binary_entropy_bits(x):
    x = mpf(x)
    return entropy_bits([x, 1 - x])


def classical_joint_exact(inputs, n, k):
    """2x2 joint of (A_k, A_k+1) as Fractions, by enumerating s."""
    N = 2**n
    table = [[Fraction(0)] * 2 for _ in range(2)]
    for s in range(N):
        outs = [0] + [int(x == s) for x in inputs]
        table[outs[k]][outs[k + 1]] += Fraction(1, N)
    return table


def conditional_bits(table):
    total = mpf(0)
    for row in table:
        mass = sum(row)
        if mass:
            total += mpf(mass.numerator) / mass.denominator * binary_entropy_bits(
                mpf(row[1].numerator) / row[1].denominator / (mpf(mass.numerator) / mass.denominator)
            )
    return float(total)


def classical_rhs_exact(inputs, n):
    return sum(conditional_bits(classical_joint_exact(inputs, n, k)) for k in range(len(inputs)))


def quantum_terms(n):
    """(H(cos^2(theta/2)), H(cos^2 theta)) at 40 digits."""
    half = asin(1 / sqrt(mpf(2) ** n))
    return binary_entropy_bits(cos(half) ** 2), binary_entropy_bits(cos(2 * half) ** 2)


# --- dense operators, index 2*x + y -------------------------------------------------

def dense_operators(n, s=0):
    N = 2**n
    I2 = np.eye(2)
    X = np.array([[0, 1], [1, 0]])
    Z = np.diag([1.0, -1.0])
    proj_s = np.zeros((N, N))
    proj_s[s, s] = 1
    oracle = np.kron(np.eye(N) - proj_s, I2) + np.kron(proj_s, X)
    phase = np.kron(np.eye(N), Z)
    psi = np.full(N, 1 / np.sqrt(N))
    diffusion = np.kron(2 * np.outer(psi, psi) - np.eye(N), I2)
    return {"oracle": oracle, "phase": phase, "diffusion": diffusion,
            "iteration": diffusion @ oracle @ phase @ oracle}


def dense_initial(n):
    N = 2**n
    v = np.zeros(2 * N)
    v[0::2] = 1 / np.sqrt(N)
    return v


def dense_pair_joint(n, k, s=0):
    """Joint of (A_k, A_k+1) by explicit projectors on the dense vector."""
    ops = dense_operators(n, s)
    N = 2**n
    proj = [np.kron(np.eye(N), np.diag([1.0, 0.0])), np.kron(np.eye(N), np.diag([0.0, 1.0]))]
    v = dense_initial(n)
    joint = np.zeros((2, 2))
    if k == 0:
        v = ops["oracle"] @ v
        for b in (0, 1):
            joint[0, b] = np.linalg.norm(proj[b] @ v) ** 2
        return joint
    for _ in range(k - 1):
        v = ops["iteration"] @ v
    v = ops["oracle"] @ v
    for a in (0, 1):
        w = proj[a] @ v  # unnormalized: carries P(a)
        w = ops["diffusion"] @ ops["oracle"] @ ops["phase"] @ w
        w = ops["oracle"] @ w
        for b in (0, 1):
            joint[a, b] = np.linalg.norm(proj[b] @ w) ** 2
    return joint
