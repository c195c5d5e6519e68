"""The optimal measurement made concrete, plus a noisy shot simulator.

For mixed 2x2 sectors the optimal projectors follow from unnormalized
eigenvector amplitudes on the two coupling branches (test copy raising or
lowering the first-register spin).  For a single template copy per register
the whole machine is an eight-dimensional basis change followed by a
computational-basis readout; the rotation matrix is hard-coded here in the
wire order (first register, second register, test copy) with the first wire
on the high bit, so basis index = 4a + 2b + x.  Outcomes tagged FIRST or
SECOND decide the test copy's origin outright; the four zero-eigenvalue
outcomes carry no information and are resolved by a fair coin.

The orientation of the rotation (which wire each printed arrow belongs to)
was fixed empirically: conjugating the dense difference operator by the
matrix must give a theta-independent diagonal whose positive entries sit
exactly on the FIRST-tagged outcomes.  The shot simulator draws a Haar
frame per shot, which operationally realizes the known-overlap prior, and
models hardware noise as a layered channel: either uniform depolarizing
with per-layer probability p, or per-qubit thermal relaxation with decay
times t1 and t2 over the accumulated gate time.  Both compose as semigroups,
so the layers collapse into a single application with the effective total
strength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .angular import classify_sector, recoupling_coefficient
from .priors import FixedOverlap, FixedOverlapDim, Scenario
from .spectrum import difference_block

_CHUNK_SHOTS = 4096
_DEFAULT_LAYERS = 43
_DEFAULT_DURATION_1Q = 200e-9
_DEFAULT_DURATION_2Q = 800e-9

_ROOT3 = math.sqrt(3.0)
# The nonzero entries close under p + m = -1/sqrt(3) and p*m = -1/6.
_P = (-3.0 - _ROOT3) / 6.0
_M = (3.0 - _ROOT3) / 6.0
_C = 1.0 / _ROOT3
_MEASUREMENT_MATRIX = np.array(
    [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, _C, _C, 0.0, _C, 0.0, 0.0, 0.0],
        [0.0, _C, _P, 0.0, _M, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, _P, 0.0, _M, _C, 0.0],
        [0.0, _C, _M, 0.0, _P, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, _M, 0.0, _P, _C, 0.0],
        [0.0, 0.0, 0.0, _C, 0.0, _C, _C, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ]
)


class Guess(Enum):
    FIRST = "first"
    SECOND = "second"
    COIN = "coin"


OUTCOME_GUESSES: tuple[Guess, ...] = (
    Guess.COIN,
    Guess.COIN,
    Guess.FIRST,
    Guess.SECOND,
    Guess.SECOND,
    Guess.FIRST,
    Guess.COIN,
    Guess.COIN,
)

# FIRST -> 0, SECOND -> 1, COIN -> 2, aligned with OUTCOME_GUESSES.
_GUESS_CODES = np.array([2, 2, 0, 1, 1, 0, 2, 2])


def measurement_basis_matrix() -> tuple[np.ndarray, tuple[Guess, ...]]:
    """Single-copy machine: basis rotation and the guess for each outcome.

    The returned matrix sends the eigenvectors of the difference operator to
    computational basis states (it is symmetric and orthogonal, so it is its
    own inverse); measuring after it and applying the outcome guesses
    realizes the minimum-error discrimination for every template angle at
    once.
    """
    return _MEASUREMENT_MATRIX.copy(), OUTCOME_GUESSES


def single_copy_error(theta: float) -> float:
    """Closed-form minimal error for one template copy per register."""
    return 0.5 - (1.0 + math.cos(theta)) / (4.0 * _ROOT3)


@dataclass(frozen=True)
class EigvecAmplitudes:
    """Unnormalized eigenvector amplitudes on the two coupling branches.

    `raised` multiplies the branch where the test copy raises the
    first-register spin, `lowered` the branch where it lowers it.
    """

    raised: float
    lowered: float


def _mixed_block_entries(s, t, q, n: int, scenario: Scenario):
    """(diag_raised, diag_lowered, off) of the 2x2 block, scale factored out."""
    if isinstance(scenario, (FixedOverlap, FixedOverlapDim)):
        # Rank-2 difference of the two register-raised states; expressed on
        # the raising/lowering branches via the recoupling overlaps.
        c_pp = recoupling_coefficient(s, t, q, 1, 1)
        c_mp = recoupling_coefficient(s, t, q, -1, 1)
        return 1.0 - c_pp * c_pp, -c_mp * c_mp, -c_pp * c_mp
    return difference_block(s, t, q, n, scenario).entries


def eigenvector_amplitudes(
    sector, n: int, scenario: Scenario
) -> tuple[EigvecAmplitudes, EigvecAmplitudes]:
    """Unnormalized optimal-measurement eigenvectors of a mixed 2x2 sector.

    `sector` is the spin triple (s, t, q).  Returns the pair for the upper
    and lower eigenvalue, in that order.  Sectors whose block is 1x1 are
    rejected: there the eigenvectors are the coupling basis vectors
    themselves.
    """
    s, t, q = sector
    case = classify_sector(s, t, q)
    if case != "mixed":
        raise ValueError(f"sector {sector} is {case}; eigenvectors are basis vectors")
    diag_up, diag_down, off = _mixed_block_entries(s, t, q, n, scenario)
    average = 0.5 * (diag_up + diag_down)
    spread = math.hypot(0.5 * (diag_up - diag_down), off)
    pair = []
    for value in (average + spread, average - spread):
        head = (off, value - diag_up)
        tail = (value - diag_down, off)
        chosen = head if math.hypot(*head) >= math.hypot(*tail) else tail
        pair.append(EigvecAmplitudes(*chosen))
    return pair[0], pair[1]


@dataclass(frozen=True)
class NoiseModel:
    """Layered channel surrogate for the machine's gate-level noise.

    `kind` is one of "none", "depolarizing" or "thermal".  Depolarizing
    applies probability p_depol per layer, compounded over layer_count
    layers.  Thermal applies per-qubit amplitude damping and dephasing over
    the accumulated duration layer_count * (duration_1q + duration_2q),
    with relaxation times t1 and t2 in the same units as the durations.
    """

    kind: str
    p_depol: float = 0.0
    t1: float = math.inf
    t2: float = math.inf
    duration_1q: float = _DEFAULT_DURATION_1Q
    duration_2q: float = _DEFAULT_DURATION_2Q
    layer_count: int = _DEFAULT_LAYERS

    def __post_init__(self) -> None:
        if self.kind not in ("none", "depolarizing", "thermal"):
            raise ValueError(f"unknown noise kind: {self.kind!r}")
        if not 0.0 <= self.p_depol <= 1.0:
            raise ValueError(f"p_depol must lie in [0, 1], got {self.p_depol}")
        if self.layer_count < 1:
            raise ValueError(f"layer_count must be positive, got {self.layer_count}")
        if self.kind == "thermal":
            if not (self.t1 > 0.0 and self.t2 > 0.0):
                raise ValueError("thermal noise needs positive relaxation times")
            if self.t2 > 2.0 * self.t1:
                raise ValueError(f"t2 must not exceed 2 t1, got t2={self.t2} t1={self.t1}")
            if self.duration_1q < 0.0 or self.duration_2q < 0.0:
                raise ValueError("gate durations must be nonnegative")

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls(kind="none")

    @classmethod
    def depolarizing(cls, p_depol: float, layer_count: int = _DEFAULT_LAYERS) -> "NoiseModel":
        return cls(kind="depolarizing", p_depol=p_depol, layer_count=layer_count)

    @classmethod
    def thermal(
        cls,
        t1: float,
        t2: float,
        duration_1q: float = _DEFAULT_DURATION_1Q,
        duration_2q: float = _DEFAULT_DURATION_2Q,
        layer_count: int = _DEFAULT_LAYERS,
    ) -> "NoiseModel":
        return cls(
            kind="thermal",
            t1=t1,
            t2=t2,
            duration_1q=duration_1q,
            duration_2q=duration_2q,
            layer_count=layer_count,
        )


def _depolarizing_strength(noise: NoiseModel) -> float:
    return 1.0 - (1.0 - noise.p_depol) ** noise.layer_count


def _thermal_kraus(noise: NoiseModel) -> list[np.ndarray]:
    """Single-qubit Kraus operators for the accumulated circuit duration."""
    duration = noise.layer_count * (noise.duration_1q + noise.duration_2q)
    inv_t1 = 0.0 if math.isinf(noise.t1) else 1.0 / noise.t1
    inv_t2 = 0.0 if math.isinf(noise.t2) else 1.0 / noise.t2
    gamma = 1.0 - math.exp(-duration * inv_t1)
    # Coherence beyond the amplitude-damping loss is pure dephasing; the
    # t2 <= 2 t1 invariant keeps the residual rate nonnegative.
    dephasing_rate = max(inv_t2 - 0.5 * inv_t1, 0.0)
    pz = 0.5 * (1.0 - math.exp(-duration * dephasing_rate))
    damp_keep = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]])
    damp_decay = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]])
    z = np.diag([1.0, -1.0])
    root_keep = math.sqrt(1.0 - pz)
    root_flip = math.sqrt(pz)
    return [
        root_keep * damp_keep,
        root_keep * damp_decay,
        root_flip * (z @ damp_keep),
        root_flip * (z @ damp_decay),
    ]


def _expand_to_wire(op: np.ndarray, wire: int) -> np.ndarray:
    factors = [np.eye(2), np.eye(2), np.eye(2)]
    factors[wire] = op
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def apply_noise(rho: np.ndarray, noise: NoiseModel) -> np.ndarray:
    """Apply the noise channel to a three-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError(f"three-qubit density matrix expected, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix must be positive semidefinite")
    if noise.kind == "none":
        return rho.copy()
    if noise.kind == "depolarizing":
        strength = _depolarizing_strength(noise)
        return (1.0 - strength) * rho + strength * np.eye(8) / 8.0
    out = rho
    for wire in range(3):
        expanded = [_expand_to_wire(k, wire) for k in _thermal_kraus(noise)]
        out = sum(k @ out @ k.conj().T for k in expanded)
    return out


@dataclass(frozen=True)
class SimulationResult:
    theta: float
    shots: int
    frequency: float
    stderr: float


def _simulate_chunk(theta: float, count: int, noise: NoiseModel, rng) -> int:
    labels = rng.integers(0, 2, size=count)
    raw = rng.normal(size=(count, 2, 2)) + 1j * rng.normal(size=(count, 2, 2))
    frames, upper = np.linalg.qr(raw)
    diag = np.einsum("nii->ni", upper)
    frames = frames * (diag / np.abs(diag))[:, None, :]

    psi1 = np.array([1.0, 0.0], dtype=complex)
    psi2 = np.array([math.sin(theta / 2.0), math.cos(theta / 2.0)], dtype=complex)
    first_states = frames @ psi1
    second_states = frames @ psi2
    test_states = np.where(labels[:, None] == 0, first_states, second_states)
    product = np.einsum(
        "na,nb,nx->nabx", first_states, second_states, test_states
    ).reshape(count, 8)
    rotated = product @ _MEASUREMENT_MATRIX.T

    if noise.kind == "none":
        probabilities = np.abs(rotated) ** 2
    elif noise.kind == "depolarizing":
        strength = _depolarizing_strength(noise)
        probabilities = (1.0 - strength) * np.abs(rotated) ** 2 + strength / 8.0
    else:
        rho = np.einsum("ni,nj->nij", rotated, rotated.conj())
        for wire in range(3):
            expanded = [_expand_to_wire(k, wire) for k in _thermal_kraus(noise)]
            rho = sum(
                np.einsum("ij,njk,lk->nil", k, rho, k.conj()) for k in expanded
            )
        probabilities = np.einsum("nii->ni", rho).real
    probabilities = np.maximum(probabilities, 0.0)
    probabilities /= probabilities.sum(axis=1, keepdims=True)

    picks = rng.random(count)
    cumulative = np.cumsum(probabilities, axis=1)
    outcomes = np.minimum((cumulative < picks[:, None]).sum(axis=1), 7)
    coins = rng.integers(0, 2, size=count)
    codes = _GUESS_CODES[outcomes]
    guesses = np.where(codes == 2, coins, codes)
    return int((guesses != labels).sum())


def simulate_misclassification(
    theta: float,
    shots: int,
    noise: NoiseModel | None = None,
    seed: int = 0,
) -> SimulationResult:
    """Shot-sampled error frequency of the single-copy machine.

    Each shot draws the hidden origin of the test copy with even odds and a
    Haar-random frame applied to all three wires, runs the rotation, applies
    the noise channel and reads the computational basis; coin outcomes are
    resolved by a seeded fair coin.  Shots are processed in fixed chunks of
    4096 with one child generator per chunk, so the result depends only on
    (theta, shots, noise, seed), no matter how chunks would be scheduled.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    noise = NoiseModel.none() if noise is None else noise
    errors = 0
    done = 0
    chunk_index = 0
    while done < shots:
        count = min(_CHUNK_SHOTS, shots - done)
        rng = np.random.default_rng([seed, chunk_index])
        errors += _simulate_chunk(theta, count, noise, rng)
        done += count
        chunk_index += 1
    frequency = errors / shots
    stderr = math.sqrt(frequency * (1.0 - frequency) / shots)
    return SimulationResult(theta=theta, shots=shots, frequency=frequency, stderr=stderr)
