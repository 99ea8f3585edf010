"""Exact noiseless simulation of SWAP-rotation circuits.

Two interchangeable engines hold the amplitudes:

- full: the complete 2^N computational basis, indexed by the integer value of
  the bit string (bit 1, the leftmost printed character, is the most
  significant bit);
- subspace: only the strings whose Hamming weight inside each position block
  matches a reference string. Mixers act inside position blocks and phase
  separators are diagonal, so these weights are conserved and the restriction
  is exact (for a busy instance started from a solution: J^P states).

A swap rotation by angle beta multiplies basis states with equal bits on the
pair by e^{i beta} and mixes unequal pairs as cos(beta)|z> + i sin(beta)
|z_swapped>; at beta = pi/2 it acts as i * SWAP, at 0 as the identity. A
mixer applies the rotation to one adjacent job pair inside every position
block; the rotations commute. Circuits interleave phase separators
e^{i gamma f(z)} with mixers; layers are stored in application order.

All state comparisons in tests use fidelity |<phi|psi>| since pi/2 rotations
introduce global phases of i per swapped pair.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, DomainError
from .instances import (
    Objective,
    OsspInstance,
    bits_to_int,
    check_bitstring,
    feasibility_mask,
    int_to_bits,
    objective_values,
    position_blocks,
)

SUBSPACE_DIM_CAP = 1 << 20
SIMULTANEOUS_DIM_CAP = 4096
BETA_LO, BETA_HI = 0.0, math.pi / 2


# ---------------------------------------------------------------------------
# bases and states


@dataclass(eq=False)
class Basis:
    """Computational basis: full (states is None) or an explicit sorted subset."""

    n_bits: int
    states: np.ndarray | None = None  # sorted int64 basis-state values

    @property
    def engine(self) -> str:
        return "full" if self.states is None else "subspace"

    @property
    def dim(self) -> int:
        return (1 << self.n_bits) if self.states is None else len(self.states)

    def values(self) -> np.ndarray:
        if self.states is None:
            return np.arange(1 << self.n_bits, dtype=np.int64)
        return self.states

    def index_of(self, value: int) -> int:
        if self.states is None:
            if not (0 <= value < (1 << self.n_bits)):
                raise DomainError(f"basis value {value} out of range for {self.n_bits} bits")
            return int(value)
        pos = int(np.searchsorted(self.states, value))
        if pos >= len(self.states) or self.states[pos] != value:
            raise DomainError(
                f"string {int_to_bits(value, self.n_bits)} is not in the restricted basis"
            )
        return pos


@dataclass(eq=False)
class QuantumState:
    basis: Basis
    amps: np.ndarray

    @property
    def engine(self) -> str:
        return self.basis.engine

    def copy(self) -> "QuantumState":
        return QuantumState(self.basis, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def full_basis(n_bits: int) -> Basis:
    return Basis(n_bits, None)


def subspace_basis(instance: OsspInstance, z: str) -> Basis:
    """All strings sharing z's Hamming weight in every position block."""
    check_bitstring(z, instance.n_bits)
    n = instance.n_bits
    block_choices: list[list[int]] = []
    dim = 1
    for block in position_blocks(instance):
        weight = sum(z[i - 1] == "1" for i in block)
        bit_masks = [1 << (n - i) for i in block]
        choices = [
            sum(combo) for combo in itertools.combinations(bit_masks, weight)
        ]
        dim *= len(choices)
        if dim > SUBSPACE_DIM_CAP:
            raise CapabilityError(
                f"restricted basis would exceed {SUBSPACE_DIM_CAP} states"
            )
        block_choices.append(choices)
    values = [0]
    for choices in block_choices:
        values = [v + c for v in values for c in choices]
    return Basis(n, np.array(sorted(values), dtype=np.int64))


def basis_state(instance: OsspInstance, z: str, engine="full") -> QuantumState:
    """Unit amplitude on |z>. engine is 'full', 'subspace', or an explicit Basis."""
    check_bitstring(z, instance.n_bits)
    if isinstance(engine, Basis):
        basis = engine
    elif engine == "full":
        basis = full_basis(instance.n_bits)
    elif engine == "subspace":
        basis = subspace_basis(instance, z)
    else:
        raise DomainError(f"unknown engine {engine!r}")
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.index_of(bits_to_int(z))] = 1.0
    return QuantumState(basis, amps)


def pure_state(n_bits: int, z: str) -> QuantumState:
    """Full-engine basis state without an instance (gate-level testing)."""
    check_bitstring(z, n_bits)
    amps = np.zeros(1 << n_bits, dtype=np.complex128)
    amps[bits_to_int(z)] = 1.0
    return QuantumState(full_basis(n_bits), amps)


def amplitude(state: QuantumState, z: str) -> complex:
    """Amplitude on |z>; 0 for strings outside a restricted basis."""
    check_bitstring(z, state.basis.n_bits)
    try:
        return complex(state.amps[state.basis.index_of(bits_to_int(z))])
    except DomainError:
        return 0.0


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>| for states over the identical basis."""
    if a.basis.n_bits != b.basis.n_bits or a.basis.engine != b.basis.engine:
        raise DomainError("fidelity requires states over the same basis")
    if a.basis.states is not None and not np.array_equal(a.basis.states, b.basis.states):
        raise DomainError("fidelity requires states over the same restricted basis")
    return float(abs(np.vdot(a.amps, b.amps)))


def basis_strings(basis: Basis) -> list[str]:
    return [int_to_bits(int(v), basis.n_bits) for v in basis.values()]


# ---------------------------------------------------------------------------
# gates


def _pair_masks(basis: Basis, pair) -> tuple[int, int]:
    a, b = pair
    n = basis.n_bits
    if not (1 <= a <= n and 1 <= b <= n) or a == b:
        raise DomainError(f"invalid bit pair {pair!r} for {n} bits")
    return 1 << (n - a), 1 << (n - b)


def apply_swap_rotation(state: QuantumState, pair, beta: float) -> QuantumState:
    """e^{i beta SWAP} on the two given 1-based bit indices."""
    ma, mb = _pair_masks(state.basis, pair)
    vals = state.basis.values()
    has_a = (vals & ma) != 0
    has_b = (vals & mb) != 0
    out = state.amps * np.exp(1j * beta)  # equal-bit states pick up the phase
    d10 = np.nonzero(has_a & ~has_b)[0]
    if len(d10):
        partners = vals[d10] ^ (ma | mb)
        if state.basis.states is None:
            p01 = partners
        else:
            p01 = np.searchsorted(state.basis.states, partners)
            if np.any(p01 >= len(vals)) or not np.array_equal(vals[p01], partners):
                raise DomainError(
                    f"swap on pair {pair} leaves the restricted basis"
                )
        c, s = math.cos(beta), math.sin(beta)
        out[d10] = c * state.amps[d10] + 1j * s * state.amps[p01]
        out[p01] = c * state.amps[p01] + 1j * s * state.amps[d10]
    return QuantumState(state.basis, out)


@dataclass(frozen=True)
class MixerHamiltonian:
    """Sum of disjoint SWAPs realizing one adjacent job transposition: one
    (job i, job i+1) bit pair inside every position block."""

    generator: int
    pairs: tuple[tuple[int, int], ...]


def mixer_hamiltonian(instance: OsspInstance, i: int) -> MixerHamiltonian:
    if not (1 <= i <= instance.jobs - 1):
        raise DomainError(
            f"mixer index {i} out of range 1..{instance.jobs - 1}"
        )
    pairs = tuple(
        (block[i - 1], block[i]) for block in position_blocks(instance)
    )
    return MixerHamiltonian(i, pairs)


def mixers(instance: OsspInstance) -> list[MixerHamiltonian]:
    return [mixer_hamiltonian(instance, i) for i in range(1, instance.jobs)]


def apply_mixer(state: QuantumState, mixer: MixerHamiltonian, beta: float) -> QuantumState:
    """Product of the P commuting swap rotations at the same angle."""
    for pair in mixer.pairs:
        state = apply_swap_rotation(state, pair, beta)
    return state


@dataclass(eq=False)
class PhaseSeparator:
    """Objective values f(z) per basis state; acts as z -> e^{i gamma f(z)} z."""

    values: np.ndarray


def phase_separator(objective: Objective, instance: OsspInstance, basis: Basis) -> PhaseSeparator:
    return PhaseSeparator(objective_values(objective, instance, basis.values()))


def apply_phase_separator(state: QuantumState, sep: PhaseSeparator, gamma: float) -> QuantumState:
    if len(sep.values) != len(state.amps):
        raise DomainError("phase separator was built for a different basis")
    return QuantumState(state.basis, state.amps * np.exp(1j * gamma * sep.values))


def apply_simultaneous_mixer(state: QuantumState, mixer_list, beta: float) -> QuantumState:
    """e^{-i beta sum_i B_i} via a dense exponential on the restricted basis.

    A single-member family therefore equals apply_mixer with beta -> -beta.
    """
    if state.basis.states is None:
        raise CapabilityError(
            "the simultaneous mixer needs the restricted engine (dense exponential)"
        )
    dim = state.basis.dim
    if dim > SIMULTANEOUS_DIM_CAP:
        raise CapabilityError(
            f"restricted basis of {dim} states exceeds the dense-exponential cap "
            f"of {SIMULTANEOUS_DIM_CAP}"
        )
    from scipy.linalg import expm

    vals = state.basis.states
    h = np.zeros((dim, dim))
    for mixer in mixer_list:
        for pair in mixer.pairs:
            ma, mb = _pair_masks(state.basis, pair)
            differ = ((vals & ma) != 0) != ((vals & mb) != 0)
            same_idx = np.nonzero(~differ)[0]
            h[same_idx, same_idx] += 1.0
            d_idx = np.nonzero(differ)[0]
            if len(d_idx):
                partners = vals[d_idx] ^ (ma | mb)
                p_idx = np.searchsorted(vals, partners)
                if np.any(p_idx >= dim) or not np.array_equal(vals[p_idx], partners):
                    raise DomainError(
                        f"swap on pair {pair} leaves the restricted basis"
                    )
                h[p_idx, d_idx] += 1.0
    u = expm(-1j * beta * h)
    return QuantumState(state.basis, u @ state.amps)


# ---------------------------------------------------------------------------
# measurement

def expectation(state: QuantumState, sep: PhaseSeparator) -> float:
    """<state| f |state> = sum_z f(z) |amp(z)|^2."""
    if len(sep.values) != len(state.amps):
        raise DomainError("diagonal was built for a different basis")
    probs = (state.amps.conj() * state.amps).real
    return float(probs @ sep.values)


def probabilities(state: QuantumState, threshold: float = 1e-14) -> dict[str, float]:
    """Nonnegligible Born probabilities keyed by bit string."""
    probs = (state.amps.conj() * state.amps).real
    n = state.basis.n_bits
    vals = state.basis.values()
    keep = np.nonzero(probs > threshold)[0]
    order = sorted(keep, key=lambda k: (-probs[k], int(vals[k])))
    return {int_to_bits(int(vals[k]), n): float(probs[k]) for k in order}


def sample(state: QuantumState, shots: int, seed) -> dict[str, int]:
    """Multinomial measurement histogram; identical seed gives identical counts."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    probs = (state.amps.conj() * state.amps).real
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    n = state.basis.n_bits
    vals = state.basis.values()
    keep = np.nonzero(counts)[0]
    order = sorted(keep, key=lambda k: (-counts[k], int(vals[k])))
    return {int_to_bits(int(vals[k]), n): int(counts[k]) for k in order}


def feasible_mass(instance: OsspInstance, state: QuantumState) -> float:
    """Total Born probability carried by feasible strings."""
    probs = (state.amps.conj() * state.amps).real
    mask = feasibility_mask(instance, state.basis.values())
    return float(probs[mask].sum())


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class Layer:
    kind: str  # 'mixer' | 'phase'
    generator: int  # mixer index; 0 for phase layers
    slot: int  # index into the beta (mixer) or gamma (phase) vector


@dataclass(eq=False)
class Circuit:
    """Alternating phase/mixer layers in application order.

    Round r (1-based) applies the phase separator with gamma slot r-1, then
    the mixers B_{J-1}, ..., B_1 with beta slots (r-1)(J-1)+i-1 for B_i. At
    (beta1, beta2, ...) = (pi/2, ..., pi/2) and gamma = 0 one round realizes
    the job permutation tau_1 o tau_2 o ... (tau_{J-1} acting first).
    """

    instance: OsspInstance
    objective: Objective
    depth: int
    layers: tuple[Layer, ...]
    n_beta: int
    n_gamma: int
    _sep_cache: dict = field(default_factory=dict, repr=False)

    def phase_for(self, basis: Basis) -> PhaseSeparator:
        key = id(basis)
        hit = self._sep_cache.get(key)
        if hit is not None and hit[0] is basis:
            return hit[1]
        sep = phase_separator(self.objective, self.instance, basis)
        self._sep_cache[key] = (basis, sep)
        return sep


@dataclass(eq=False)
class ParameterVector:
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self) -> None:
        self.beta = np.asarray(self.beta, dtype=float)
        self.gamma = np.asarray(self.gamma, dtype=float)


def zero_params(circuit: Circuit) -> ParameterVector:
    return ParameterVector(np.zeros(circuit.n_beta), np.zeros(circuit.n_gamma))


def build_circuit(instance: OsspInstance, objective: Objective, depth: int) -> Circuit:
    """depth rounds of [phase, mixers]; (J-1) beta slots and 1 gamma slot per round."""
    if depth < 1:
        raise DomainError("circuit depth must be >= 1")
    layers: list[Layer] = []
    for r in range(depth):
        layers.append(Layer("phase", 0, r))
        for i in range(instance.jobs - 1, 0, -1):
            layers.append(Layer("mixer", i, r * (instance.jobs - 1) + (i - 1)))
    return Circuit(
        instance=instance,
        objective=objective,
        depth=depth,
        layers=tuple(layers),
        n_beta=depth * (instance.jobs - 1),
        n_gamma=depth,
    )


def clamp_beta(beta: np.ndarray) -> np.ndarray:
    """Force mixer angles into [0, pi/2], warning when anything moved."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta < BETA_LO - 1e-12) or np.any(beta > BETA_HI + 1e-12):
        warnings.warn(
            "mixer angles outside [0, pi/2] were clamped", stacklevel=3
        )
    return np.clip(beta, BETA_LO, BETA_HI)


def apply_circuit(circuit: Circuit, params: ParameterVector, state: QuantumState) -> QuantumState:
    if len(params.beta) != circuit.n_beta or len(params.gamma) != circuit.n_gamma:
        raise DomainError(
            f"parameter shape ({len(params.beta)} beta, {len(params.gamma)} gamma) "
            f"does not match circuit slots ({circuit.n_beta}, {circuit.n_gamma})"
        )
    beta = clamp_beta(params.beta)
    mix = {m.generator: m for m in mixers(circuit.instance)}
    sep = circuit.phase_for(state.basis)
    for layer in circuit.layers:
        if layer.kind == "mixer":
            state = apply_mixer(state, mix[layer.generator], beta[layer.slot])
        else:
            state = apply_phase_separator(state, sep, params.gamma[layer.slot])
    return state
