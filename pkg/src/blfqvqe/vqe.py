"""Variational outer loop and the shot-scaling experiment.

The cost surface is the exact or shot-sampled energy of an ansatz state
under a Pauli-sum Hamiltonian.  Sampled costs reuse the run seed for
every evaluation (common random numbers), so the surface the optimizer
sees is deterministic and every run is bit-reproducible for a fixed
seed and configuration.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .simulator import (Circuit, Statevector, compact_ansatz, direct_ansatz,
                        expectation_exact, expectation_sampled,
                        jw_to_bk_circuit, run_circuit)

ENCODINGS = ("direct", "compact", "bk")
MODES = ("exact", "sampled", "sampled+noise", "sampled+noise+mitigation")

# Angles preparing the (0, -1/sqrt2, +1/sqrt2, 0) starting state.
GOOD_GUESS = {
    "direct": (1.5 * np.pi, 0.0, 0.0),
    "bk": (1.5 * np.pi, 0.0, 0.0),
    "compact": (0.0, 0.5 * np.pi, -np.pi),
}

_METHODS = {"simplex": "Nelder-Mead", "linear-trust-region": "COBYLA"}


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the derivative-free minimizer.

    initial_scale sets the edge length of the starting simplex (simplex
    method) or the initial trust radius (linear-trust-region method);
    None keeps the backend's own default construction.
    """

    method: str = "simplex"
    max_iterations: int = 500
    tolerance: float = 1.0
    initial_scale: float = None
    restarts: int = 0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")


@dataclass(frozen=True)
class VqeResult:
    theta: tuple
    energy: float
    trace: tuple          # (evaluation index, best energy so far) pairs
    mode: str
    converged: bool
    n_iterations: int
    std_error: float = None

    def __post_init__(self):
        best = np.inf
        for _, e in self.trace:
            if e > best + 1e-12:
                raise ValueError("trace is not monotone non-increasing")
            best = min(best, e)


def minimize(cost, theta0, config=None, mode="exact"):
    """Derivative-free minimization over the 3 ansatz angles.

    Runs the configured method, restarting from the best point found if
    restarts are requested.  converged=False flags hitting the iteration
    budget without meeting the tolerance.
    """
    config = config or OptimizerConfig()
    best_energy = np.inf
    best_theta = np.asarray(theta0, dtype=float)
    trace = []

    def wrapped(t):
        nonlocal best_energy, best_theta
        e = float(cost(np.asarray(t, dtype=float)))
        if e < best_energy:
            best_energy = e
            best_theta = np.array(t, dtype=float)
        trace.append((len(trace), best_energy))
        return e

    method = _METHODS[config.method]
    start = np.asarray(theta0, dtype=float)
    converged = False
    iterations = 0
    for _ in range(config.restarts + 1):
        if method == "Nelder-Mead":
            options = {"maxiter": config.max_iterations,
                       "fatol": config.tolerance, "adaptive": True}
            if config.initial_scale is not None:
                simplex = np.vstack([start] +
                                    [start + config.initial_scale * row
                                     for row in np.eye(start.size)])
                options["initial_simplex"] = simplex
            res = scipy.optimize.minimize(wrapped, start, method="Nelder-Mead",
                                          options=options)
            iterations += int(res.nit)
        else:
            options = {"maxiter": config.max_iterations}
            if config.initial_scale is not None:
                options["rhobeg"] = config.initial_scale
            res = scipy.optimize.minimize(wrapped, start, method="COBYLA",
                                          options=options)
            iterations += int(res.nfev)
        converged = bool(res.success)
        start = best_theta.copy()
    return VqeResult(theta=tuple(best_theta), energy=best_energy,
                     trace=tuple(trace), mode=mode, converged=converged,
                     n_iterations=iterations)


def ansatz_circuit(encoding, theta):
    """The state-preparation circuit for one encoding."""
    t1, t2, t3 = theta
    if encoding == "direct":
        return direct_ansatz(t1, t2, t3)
    if encoding == "compact":
        return compact_ansatz(t1, t2, t3)
    if encoding == "bk":
        base = direct_ansatz(t1, t2, t3)
        conv = jw_to_bk_circuit()
        return Circuit(4, base.gates + conv.gates)
    raise ValueError(f"unknown encoding {encoding!r}")


def _required_qubits(encoding):
    return 2 if encoding == "compact" else 4


def prepared_state(encoding, theta):
    circ = ansatz_circuit(encoding, theta)
    return run_circuit(circ, Statevector.zero(circ.n_qubits))


def extract_amplitudes(state, encoding, tol=1e-8):
    """Real basis coefficients encoded in a prepared qubit state.

    Inverts the encoding map: the compact register holds the four
    coefficients directly, the direct register holds them on the
    one-excitation indices 2^i, and the bk register is first rotated
    back through the (self-inverse) conversion network.  The global
    sign is fixed so the largest-magnitude coefficient is positive.
    Raises if the state leaks outside the encoded subspace or carries
    imaginary amplitude beyond tol.
    """
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}")
    if encoding == "bk":
        conv = jw_to_bk_circuit()
        state = run_circuit(Circuit(4, tuple(reversed(conv.gates))), state)
    amps = state.amplitudes
    if np.abs(amps.imag).max() > tol:
        raise ValueError("state has imaginary amplitudes")
    real = amps.real
    if encoding == "compact":
        coeffs = real.copy()
    else:
        idx = [1 << i for i in range(4)]
        coeffs = real[idx]
        leak = np.linalg.norm(amps) ** 2 - np.linalg.norm(coeffs) ** 2
        if leak > tol:
            raise ValueError(f"state leaks outside the one-excitation "
                             f"subspace by {leak:.3e}")
    coeffs = coeffs / np.linalg.norm(coeffs)
    if coeffs[np.argmax(np.abs(coeffs))] < 0:
        coeffs = -coeffs
    return coeffs


def vqe_run(hamiltonian, encoding, mode="exact", shots=8192, noise=None,
            seed=0, config=None, initial=None):
    """Minimize the energy of `hamiltonian` (a PauliSum) for one encoding.

    The Pauli sum must already be expressed in the requested encoding;
    its qubit count is checked against the ansatz register.  The final
    energy and angles come from the best evaluation seen; in sampled
    modes std_error carries the combined shot noise at that point.
    """
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if hamiltonian.n_qubits != _required_qubits(encoding):
        raise ValueError(f"{encoding} encoding needs "
                         f"{_required_qubits(encoding)} qubits, operator has "
                         f"{hamiltonian.n_qubits}")
    if mode in ("sampled+noise", "sampled+noise+mitigation") and noise is None:
        raise ValueError(f"mode {mode!r} needs a noise model")
    mitigate = mode == "sampled+noise+mitigation"
    use_noise = noise if mode != "sampled" else None

    def cost(theta):
        state = prepared_state(encoding, theta)
        if mode == "exact":
            return expectation_exact(state, hamiltonian)
        est, _ = expectation_sampled(state, hamiltonian, shots, seed,
                                     noise=use_noise, mitigate=mitigate)
        return est

    theta0 = GOOD_GUESS[encoding] if initial is None else initial
    result = minimize(cost, theta0, config=config, mode=mode)
    if mode == "exact":
        return result
    state = prepared_state(encoding, result.theta)
    est, se = expectation_sampled(state, hamiltonian, shots, seed,
                                  noise=use_noise, mitigate=mitigate)
    return VqeResult(theta=result.theta, energy=est, trace=result.trace,
                     mode=mode, converged=result.converged,
                     n_iterations=result.n_iterations, std_error=se)


def relative_variance(state, pauli_sum, reference_energy):
    """Single-shot estimator variance, relative to the reference energy:
    sum_a c_a^2 (1 - <P_a>^2) / E_ref^2."""
    total = 0.0
    for t in pauli_sum.terms:
        if set(t.axes) == {"I"}:
            continue
        ev = expectation_exact(state, type(pauli_sum)([(t.axes, 1.0)]))
        total += t.coefficient**2 * (1.0 - ev**2)
    return total / reference_energy**2


@dataclass(frozen=True)
class ScalingResult:
    encoding: str
    rows: tuple              # (shots, RMS relative error) pairs
    exponent: float          # p in n ~ A / eps^p
    constant: float          # A
    repeats: int
    seed: int


DEFAULT_VARIANCE_FRACTIONS = (8, 16, 32, 64, 128, 256)
DEFAULT_REPEATS = {"direct": 244, "bk": 244, "compact": 600}


def scaling_experiment(hamiltonian, encoding, target_relative_errors=None,
                       repeats=None, seed=2024, theta=None, max_workers=1):
    """RMS relative error of the sampled energy versus shots per term.

    Holds the angles fixed at the exact-mode optimum (computed here when
    not supplied), picks shot counts that aim at each target relative
    error via the exact single-shot variance, runs `repeats` independent
    seeded estimates per point, and fits log eps against log n.  Returns
    the fit as n ~ constant / eps^exponent.  Each (point, repeat) pair
    draws from its own seed stream, so rows may be computed in parallel
    (max_workers > 1) without changing any number.
    """
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}")
    if theta is None:
        theta = vqe_run(hamiltonian, encoding, mode="exact").theta
    if repeats is None:
        repeats = DEFAULT_REPEATS[encoding]
    if repeats < 2:
        raise ValueError("need at least 2 repeats")
    if max_workers < 1:
        raise ValueError("max_workers must be at least 1")

    state = prepared_state(encoding, theta)
    energy = expectation_exact(state, hamiltonian)
    v_rel = relative_variance(state, hamiltonian, energy)
    if target_relative_errors is None:
        target_relative_errors = tuple(
            np.sqrt(v_rel / np.asarray(DEFAULT_VARIANCE_FRACTIONS, dtype=float)))

    def one_row(i, eps_target):
        shots = max(8, int(round(v_rel / eps_target**2)))
        sq_errors = []
        for r in range(repeats):
            est, _ = expectation_sampled(state, hamiltonian, shots,
                                         seed=[seed, i, r])
            sq_errors.append(((est - energy) / energy) ** 2)
        return shots, float(np.sqrt(np.mean(sq_errors)))

    if max_workers == 1:
        rows = [one_row(i, e) for i, e in enumerate(target_relative_errors)]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers) as pool:
            futures = [pool.submit(one_row, i, e)
                       for i, e in enumerate(target_relative_errors)]
            rows = [f.result() for f in futures]

    # noise lives in eps, so regress log eps on log n and invert the slope
    log_n = np.log([r[0] for r in rows])
    log_e = np.log([r[1] for r in rows])
    slope, intercept = np.polyfit(log_n, log_e, 1)
    exponent = -1.0 / slope
    constant = float(np.exp(-intercept / slope))
    return ScalingResult(encoding=encoding, rows=tuple(rows),
                         exponent=float(exponent), constant=constant,
                         repeats=repeats, seed=seed)
