"""Dense brute-force cross-check of the sector-based error probabilities.

Everything here is built the expensive way, on the full 2^(2n+1)-dimensional
register, so that none of the angular-momentum machinery of the fast route is
trusted implicitly.  Haar averages are computed as orthogonal projections onto
the span of qubit-permutation operators (the commutant singled out by
Schur-Weyl duality), solved in least squares against the Gram matrix

    G[a, b] = Tr[P_a P_b^dag] = 2^(number of cycles of sigma_a sigma_b^-1),

and eigenvalues come from a hand-rolled cyclic Jacobi sweep rather than a
library solver.  The only shared ingredients with the fast route are the
scenario dataclasses and the Gauss-Legendre nodes.

Register layout (fixed contract): qubit k is bit k of the basis index; qubits
0..n-1 hold the first training register, qubit n the test copy, qubits
n+1..2n the second register.  numpy's kron places its first factor on the
high bits, so operators are assembled as kron(second_register, rest).

Cost limits the module to n <= 2 (dimension 32, permutation group S_5), which
is exactly the regime the cross-validation needs.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations

import numpy as np

from .priors import (
    FixedOverlap,
    FixedOverlapDim,
    FixedPurities,
    HardSphere,
    Scenario,
    gauss_legendre_01,
)

_MAX_TWIRL_SYSTEMS = 5
_GRAM_CUTOFF = 1e-10
_QUADRATURE_NODES = 64


@lru_cache(maxsize=None)
def _twirl_basis(count: int):
    """Index maps for every P_sigma on `count` qubits, plus the Gram pseudo-inverse."""
    perms = tuple(permutations(range(count)))
    dim = 1 << count
    index_maps = np.empty((len(perms), dim), dtype=np.intp)
    for a, perm in enumerate(perms):
        for i in range(dim):
            image = 0
            for k in range(count):
                image |= ((i >> k) & 1) << perm[k]
            index_maps[a, i] = image
    gram = np.empty((len(perms), len(perms)))
    for a, pa in enumerate(perms):
        inverse = [0] * count
        for k in range(count):
            inverse[pa[k]] = k
        for b, pb in enumerate(perms):
            composed = [inverse[pb[k]] for k in range(count)]
            seen = [False] * count
            cycles = 0
            for k in range(count):
                if not seen[k]:
                    cycles += 1
                    j = k
                    while not seen[j]:
                        seen[j] = True
                        j = composed[j]
            gram[a, b] = float(1 << cycles)
    values, vectors = np.linalg.eigh(gram)
    # G is singular from four qubits on: the commutant is smaller than S_m.
    keep = values > _GRAM_CUTOFF
    pseudo_inverse = (vectors[:, keep] / values[keep]) @ vectors[:, keep].T
    return index_maps, pseudo_inverse


def twirl(op: np.ndarray, count: int) -> np.ndarray:
    """Haar average of U^(x count) op U^dag(x count), computed exactly.

    Implemented as the Hilbert-Schmidt-orthogonal projection onto
    span{P_sigma}; this equals the integral because the twirl channel is
    self-adjoint and idempotent with exactly that range.
    """
    if count > _MAX_TWIRL_SYSTEMS:
        raise ValueError(
            f"twirl supports at most {_MAX_TWIRL_SYSTEMS} qubits, got {count}"
        )
    dim = 1 << count
    op = np.asarray(op, dtype=complex)
    if op.shape != (dim, dim):
        raise ValueError(f"operator shape {op.shape} does not match {count} qubits")
    index_maps, pseudo_inverse = _twirl_basis(count)
    cols = np.arange(dim)
    overlaps = op[index_maps, cols].sum(axis=1)
    coefficients = pseudo_inverse @ overlaps
    out = np.zeros((dim, dim), dtype=complex)
    for coefficient, rows in zip(coefficients, index_maps):
        out[rows, cols] += coefficient
    return out


def qubit_state(radius: float) -> np.ndarray:
    """Qubit density matrix with Bloch vector of length `radius` along z."""
    if not 0.0 <= radius <= 1.0:
        raise ValueError(f"Bloch length must lie in [0, 1], got {radius}")
    return np.diag([(1.0 + radius) / 2.0, (1.0 - radius) / 2.0]).astype(complex)


def _kron_power(factor: np.ndarray, count: int) -> np.ndarray:
    out = factor
    for _ in range(count - 1):
        out = np.kron(out, factor)
    return out


def _template_vectors(theta: float) -> tuple[np.ndarray, np.ndarray]:
    psi1 = np.array([1.0, 0.0], dtype=complex)
    psi2 = np.array([math.sin(theta / 2.0), math.cos(theta / 2.0)], dtype=complex)
    return psi1, psi2


def alpha_beta_dense(n: int, scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Dense hypothesis states (alpha, beta) on the full 2n+1 qubit register.

    alpha carries the extra template-1 copy on the test qubit, beta the extra
    template-2 copy.  Mixed-template scenarios twirl each register on its
    own; the known-overlap scenario twirls the whole register at once.  The
    qudit variant delegates to the qubit construction, whose minimal error it
    shares.
    """
    if n not in (1, 2):
        raise ValueError(f"dense construction supports n = 1 and n = 2 only, got {n}")
    if isinstance(scenario, FixedPurities):
        first = {
            m: twirl(_kron_power(qubit_state(scenario.r1), m), m) for m in (n, n + 1)
        }
        second = {
            m: twirl(_kron_power(qubit_state(scenario.r2), m), m) for m in (n, n + 1)
        }
        return np.kron(second[n], first[n + 1]), np.kron(second[n + 1], first[n])
    if isinstance(scenario, HardSphere):
        nodes, weights = gauss_legendre_01(_QUADRATURE_NODES)
        averaged = {}
        for m in (n, n + 1):
            acc = np.zeros((1 << m, 1 << m), dtype=complex)
            for radius, weight in zip(nodes, weights):
                acc += (3.0 * weight * radius * radius) * _kron_power(
                    qubit_state(radius), m
                )
            averaged[m] = twirl(acc, m)
        return np.kron(averaged[n], averaged[n + 1]), np.kron(
            averaged[n + 1], averaged[n]
        )
    if isinstance(scenario, (FixedOverlap, FixedOverlapDim)):
        psi1, psi2 = _template_vectors(scenario.theta)
        va = np.kron(_kron_power(psi2, n), _kron_power(psi1, n + 1))
        vb = np.kron(_kron_power(psi2, n + 1), _kron_power(psi1, n))
        total = 2 * n + 1
        return (
            twirl(np.outer(va, va.conj()), total),
            twirl(np.outer(vb, vb.conj()), total),
        )
    raise TypeError(f"unsupported scenario: {scenario!r}")


def difference_dense(n: int, scenario: Scenario) -> np.ndarray:
    alpha, beta = alpha_beta_dense(n, scenario)
    return alpha - beta


def jacobi_eigvalsh(
    matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60
) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.

    Each rotation zeroes one off-diagonal pair (p, q) through the complex
    plane rotation diag(1, e^-i phi) . [[c, s], [-s, c]] with
    phi = arg(a_pq), tau = (a_qq - a_pp) / (2 |a_pq|) and the small-angle
    root t = sign(tau) / (|tau| + sqrt(1 + tau^2)).
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    a = 0.5 * (a + a.conj().T)
    dim = a.shape[0]
    if dim == 1:
        return a.real.reshape(1).copy()
    threshold = tol * max(1.0, float(np.abs(a).max()))
    for _ in range(max_sweeps):
        rotated = False
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                magnitude = abs(a[p, q])
                if magnitude <= threshold:
                    continue
                rotated = True
                phase = a[p, q] / magnitude
                tau = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * a[:, p] + c * np.conj(phase) * a[:, q]
                a[:, p] = col_p
                a[:, q] = col_q
                row_p = c * a[p, :] - s * phase * a[q, :]
                row_q = s * a[p, :] + c * phase * a[q, :]
                a[p, :] = row_p
                a[q, :] = row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
        if not rotated:
            break
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    return np.sort(np.diag(a).real)


def p_err_oracle(n: int, scenario: Scenario) -> float:
    """Minimal error 1/2 - (1/4) ||alpha - beta||_1 from the dense spectrum."""
    eigenvalues = jacobi_eigvalsh(difference_dense(n, scenario))
    return 0.5 - 0.25 * float(np.abs(eigenvalues).sum())


def _register_swap_indices(n: int) -> np.ndarray:
    dim = 1 << (2 * n + 1)
    swapped = np.empty(dim, dtype=np.intp)
    for i in range(dim):
        image = i & (1 << n)
        for k in range(n):
            image |= ((i >> k) & 1) << (n + 1 + k)
            image |= ((i >> (n + 1 + k)) & 1) << k
        swapped[i] = image
    return swapped


def swap_antisymmetry_residual(n: int, scenario: Scenario) -> float:
    """Max-norm of S Theta S^dag + Theta for the register-exchange swap S.

    Exchanging the two training registers maps alpha to beta whenever the
    templates are statistically interchangeable, so Theta must flip sign.
    """
    if isinstance(scenario, FixedPurities) and scenario.r1 != scenario.r2:
        raise ValueError("register swap is a symmetry only at equal purities")
    theta_op = difference_dense(n, scenario)
    swapped = _register_swap_indices(n)
    conjugated = theta_op[np.ix_(swapped, swapped)]
    return float(np.abs(conjugated + theta_op).max())


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def monte_carlo_discrepancy(
    n: int,
    scenario: Scenario,
    probe: np.ndarray | None = None,
    samples: int = 5000,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Z-test of the twirl construction against raw Haar sampling.

    Estimates Tr[probe (alpha - beta)] from `samples` frame draws and returns
    (mc_mean, mc_stderr, exact).  Each sample reuses one frame draw for both
    hypotheses; that keeps the variance of the difference bounded as the two
    operators approach each other.  The probe defaults to a seeded random
    Hermitian of unit Frobenius norm.
    """
    rng = np.random.default_rng(seed)
    dim = 1 << (2 * n + 1)
    if probe is None:
        raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        probe = (raw + raw.conj().T) / 2.0
        probe /= np.linalg.norm(probe)
    probe = np.asarray(probe, dtype=complex)
    exact = float(np.trace(probe @ difference_dense(n, scenario)).real)

    draws = np.empty(samples)
    if isinstance(scenario, (FixedOverlap, FixedOverlapDim)):
        psi1, psi2 = _template_vectors(scenario.theta)
        for i in range(samples):
            frame = haar_unitary(2, rng)
            p1 = frame @ psi1
            p2 = frame @ psi2
            va = np.kron(_kron_power(p2, n), _kron_power(p1, n + 1))
            vb = np.kron(_kron_power(p2, n + 1), _kron_power(p1, n))
            draws[i] = (
                va.conj() @ probe @ va - vb.conj() @ probe @ vb
            ).real
    elif isinstance(scenario, (FixedPurities, HardSphere)):
        for i in range(samples):
            if isinstance(scenario, FixedPurities):
                r1, r2 = scenario.r1, scenario.r2
            else:
                # u^(1/3) makes the radius density 3 r^2 dr.
                r1 = rng.random() ** (1.0 / 3.0)
                r2 = rng.random() ** (1.0 / 3.0)
            u1 = haar_unitary(2, rng)
            u2 = haar_unitary(2, rng)
            rho1 = u1 @ qubit_state(r1) @ u1.conj().T
            rho2 = u2 @ qubit_state(r2) @ u2.conj().T
            a = np.kron(_kron_power(rho2, n), _kron_power(rho1, n + 1))
            b = np.kron(_kron_power(rho2, n + 1), _kron_power(rho1, n))
            draws[i] = ((probe * (a - b).T).sum()).real
    else:
        raise TypeError(f"unsupported scenario: {scenario!r}")

    mean = float(draws.mean())
    stderr = float(draws.std(ddof=1) / math.sqrt(samples))
    return mean, stderr, exact
