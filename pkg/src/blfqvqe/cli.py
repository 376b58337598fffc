"""Command-line front end: configuration, runs, and serialized outputs.

Subcommands: hamiltonian, vqe, observables, scaling.  Structured results
go to JSON, curves and traces to CSV with units in the header row.
Settings resolve as flags > config file (key = value lines) > defaults;
the BLFQVQE_OUT environment variable supplies the default output
directory.  Outputs embed the resolved configuration and its hash, never
wall-clock data, so a fixed seed reruns byte-identically.

Exit codes: 0 success, 2 configuration error, 3 optimizer
non-convergence, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .basisfuncs import (BasisCutoffs, ModelParameters, WaveFunction,
                         compute_exponents, enumerate_block)
from .hamiltonian import build_effective_hamiltonian, diagonalize
from .observables import (HBARC, charge_radius, decay_constant,
                          elastic_form_factor, mass_radius, pdf)
from .pauli import embed_compact, embed_direct, jw_to_bk_pauli
from .simulator import ReadoutNoiseModel
from .vqe import (ENCODINGS, OptimizerConfig, extract_amplitudes,
                  prepared_state, scaling_experiment, vqe_run)

OUT_ENV = "BLFQVQE_OUT"
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_NUMERICAL = 4

CLI_MODES = ("exact", "sampled", "noisy")
_SUPPORTED_CUTOFFS = BasisCutoffs()


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command invocation."""

    m: float = 337.01
    mbar: float = 337.01
    kappa: float = 227.00
    b: float | None = None
    g_pi: float = 250.785e-6
    n_max: int = 0
    m_max: int = 2
    l_max: int = 0
    encoding: str = "compact"
    mode: str = "exact"
    shots: int = 8192
    seed: int = 0
    noise_p01: float | None = None
    noise_p10: float | None = None
    mitigate: bool = False
    optimizer: str = "simplex"
    max_iterations: int = 500
    tolerance: float = 1.0
    out: str = "."

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"encoding must be one of {ENCODINGS}, "
                              f"got {self.encoding!r}")
        if self.mode not in CLI_MODES:
            raise ConfigError(f"mode must be one of {CLI_MODES}, "
                              f"got {self.mode!r}")
        if self.shots < 1:
            raise ConfigError("shots must be a positive integer")
        cut = (self.n_max, self.m_max, self.l_max)
        supported = (_SUPPORTED_CUTOFFS.n_max, _SUPPORTED_CUTOFFS.m_max,
                     _SUPPORTED_CUTOFFS.l_max)
        if cut != supported:
            raise ConfigError(f"cutoffs (n_max, m_max, l_max) = {cut} are not "
                              f"supported; the interaction is tabulated for "
                              f"{supported}")
        if self.mode == "noisy":
            if self.noise_p01 is None or self.noise_p10 is None:
                raise ConfigError("mode 'noisy' needs --noise-p01 and "
                                  "--noise-p10")
            for p in (self.noise_p01, self.noise_p10):
                if not 0.0 <= p < 1.0:
                    raise ConfigError("noise probabilities must lie in [0, 1)")
        elif self.mitigate:
            raise ConfigError("--mitigate only applies to mode 'noisy'")
        try:
            self.optimizer_config()
            self.model_parameters()
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def model_parameters(self):
        return ModelParameters(m=self.m, mbar=self.mbar, kappa=self.kappa,
                               b=self.b, g_pi=self.g_pi)

    def optimizer_config(self):
        return OptimizerConfig(method=self.optimizer,
                               max_iterations=self.max_iterations,
                               tolerance=self.tolerance)

    def noise_model(self):
        if self.mode != "noisy":
            return None
        return ReadoutNoiseModel(self.noise_p01, self.noise_p10)

    def vqe_mode(self):
        if self.mode == "noisy":
            return ("sampled+noise+mitigation" if self.mitigate
                    else "sampled+noise")
        return self.mode

    def as_dict(self):
        # `out` is plumbing, not physics: leave it out of the embedded
        # config so moving the output directory keeps provenance stable
        return {f.name: getattr(self, f.name) for f in fields(self)
                if f.name != "out"}


def config_hash(config):
    blob = json.dumps(config.as_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def provenance(config):
    return {"config": config.as_dict(), "config_hash": config_hash(config),
            "seed": config.seed, "version": __version__}


_BOOL_WORDS = {"true": True, "false": False, "yes": True, "no": False,
               "1": True, "0": False}


def _coerce(name, text, target_type):
    if target_type is bool:
        word = text.strip().lower()
        if word not in _BOOL_WORDS:
            raise ConfigError(f"{name}: expected a boolean, got {text!r}")
        return _BOOL_WORDS[word]
    try:
        if target_type is int:
            return int(text)
        if target_type is float:
            return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None
    return text


_FIELD_TYPES = {"m": float, "mbar": float, "kappa": float, "b": float,
                "g_pi": float, "n_max": int, "m_max": int, "l_max": int,
                "encoding": str, "mode": str, "shots": int, "seed": int,
                "noise_p01": float, "noise_p10": float, "mitigate": bool,
                "optimizer": str, "max_iterations": int, "tolerance": float,
                "out": str}


def read_config_file(path):
    """Parse `key = value` lines; '#' starts a comment."""
    values = {}
    try:
        text = open(path).read()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, "
                              f"got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
        values[key] = _coerce(key, val.strip(), _FIELD_TYPES[key])
    return values


def resolve_config(args):
    """Apply precedence flags > config file > environment > defaults."""
    settings = {}
    if args.config is not None:
        settings.update(read_config_file(args.config))
    env_out = os.environ.get(OUT_ENV)
    if "out" not in settings and env_out:
        settings["out"] = env_out
    for name in _FIELD_TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            settings[name] = flag
    return RunConfig(**settings)


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def _pauli_dicts(h):
    direct = embed_direct(h)
    return {"direct": direct.as_dict(), "compact": embed_compact(h).as_dict(),
            "bk": jw_to_bk_pauli(direct).as_dict()}


def _tagged(value, units, mode):
    return {"value": value, "units": units, "mode": mode}


def cmd_hamiltonian(config):
    params = config.model_parameters()
    h = build_effective_hamiltonian(params)
    sol = diagonalize(h)
    payload = {
        "matrix": h.entries.tolist(),
        "units": "MeV^2",
        "eigenvalues": sol.eigenvalues.tolist(),
        "pauli": _pauli_dicts(h),
        "provenance": provenance(config),
    }
    out = os.path.join(config.out, "hamiltonian.json")
    _write_json(out, payload)
    print("effective Hamiltonian (MeV^2), J_z = 0 block:")
    for row in h.entries:
        print("  " + "  ".join(f"{v:12.1f}" for v in row))
    print("eigenvalues (MeV^2): "
          + "  ".join(f"{v:.1f}" for v in sol.eigenvalues))
    print(f"wrote {out}")
    return EXIT_OK


def _encoded_sum(h, encoding):
    if encoding == "direct":
        return embed_direct(h)
    if encoding == "compact":
        return embed_compact(h)
    return jw_to_bk_pauli(embed_direct(h))


def cmd_vqe(config):
    params = config.model_parameters()
    h = build_effective_hamiltonian(params)
    ham = _encoded_sum(h, config.encoding)
    result = vqe_run(ham, config.encoding, mode=config.vqe_mode(),
                     shots=config.shots, noise=config.noise_model(),
                     seed=config.seed, config=config.optimizer_config())
    trace_path = os.path.join(config.out, "vqe_trace.csv")
    _write_csv(trace_path, ("iteration", "energy[MeV^2]", "mode"),
               [(i + 1, e, result.mode) for i, e in result.trace])
    payload = {
        "theta": list(result.theta),
        "energy": _tagged(result.energy, "MeV^2", result.mode),
        "std_error": result.std_error,
        "encoding": config.encoding,
        "converged": result.converged,
        "n_iterations": result.n_iterations,
        "provenance": provenance(config),
    }
    result_path = os.path.join(config.out, "vqe_result.json")
    _write_json(result_path, payload)
    print(f"VQE [{config.encoding}, {result.mode}]: "
          f"energy = {result.energy:.4f} MeV^2 after "
          f"{result.n_iterations} iterations"
          + ("" if result.converged else "  (DID NOT CONVERGE)"))
    print(f"wrote {trace_path}, {result_path}")
    return EXIT_OK if result.converged else EXIT_NONCONVERGENCE


def _state_from_config(config, h, args):
    """Wave function + mode tag, from --exact or a vqe result file."""
    block = enumerate_block(0, BasisCutoffs())
    if args.exact:
        sol = diagonalize(h)
        return WaveFunction(sol.eigenvectors[:, 0], block), "exact", None
    angles_path = args.angles or os.path.join(config.out, "vqe_result.json")
    try:
        stored = json.load(open(angles_path))
    except OSError as err:
        raise ConfigError(f"no angles available: {err}; run the vqe "
                          f"subcommand first or pass --exact") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"{angles_path} is not valid JSON: {err}") from err
    encoding = stored.get("encoding")
    if encoding != config.encoding:
        raise ConfigError(f"angles file used encoding {encoding!r} but this "
                          f"run is configured for {config.encoding!r}")
    theta = tuple(float(t) for t in stored["theta"])
    state = prepared_state(config.encoding, theta)
    coeffs = extract_amplitudes(state, config.encoding)
    mode = stored.get("energy", {}).get("mode", "exact")
    vqe_energy = stored.get("energy", {}).get("value")
    return WaveFunction(coeffs, block), mode, vqe_energy


def cmd_observables(config, args):
    params = config.model_parameters()
    exps = compute_exponents(params)
    h = build_effective_hamiltonian(params)
    psi, mode, vqe_energy = _state_from_config(config, h, args)

    m_pi2 = float(psi.coefficients @ h.entries @ psi.coefficients)
    f_pi = abs(decay_constant(psi, params, exps))
    r_m2, r_m = mass_radius(psi, params)

    curve = elastic_form_factor(psi, params, max_workers=4)
    r_c = charge_radius(curve)

    x_grid = np.linspace(0.005, 0.995, 199)
    density = pdf(psi, x_grid, exps)

    table = {
        "m_pi2": _tagged(m_pi2, "MeV^2", mode),
        "m_pi": _tagged(float(np.sqrt(m_pi2)), "MeV", mode),
        "f_pi": _tagged(f_pi, "MeV", mode),
        "mass_radius_squared": _tagged(r_m2, "fm^2", mode),
        "mass_radius": _tagged(r_m, "fm", mode),
        "charge_radius": _tagged(r_c, "MeV^-1", mode),
        "charge_radius_fm": _tagged(r_c * HBARC, "fm", mode),
        "provenance": provenance(config),
    }
    if vqe_energy is not None:
        table["vqe_energy"] = _tagged(vqe_energy, "MeV^2", mode)

    obs_path = os.path.join(config.out, "observables.json")
    _write_json(obs_path, table)
    ff_path = os.path.join(config.out, "form_factor.csv")
    _write_csv(ff_path, ("Q2[MeV^2]", "F_P[dimensionless]"),
               zip(curve.q2, curve.values))
    pdf_path = os.path.join(config.out, "pdf.csv")
    _write_csv(pdf_path, ("x[dimensionless]", "f[dimensionless]"),
               zip(x_grid.tolist(), density.values.tolist()))
    print(f"observables [{mode}]: m_pi^2 = {m_pi2:.2f} MeV^2, "
          f"f_pi = {f_pi:.3f} MeV, <r_m^2> = {r_m2:.4f} fm^2, "
          f"r_c = {r_c:.4e} MeV^-1")
    print(f"wrote {obs_path}, {ff_path}, {pdf_path}")
    return EXIT_OK


def cmd_scaling(config):
    params = config.model_parameters()
    h = build_effective_hamiltonian(params)
    ham = _encoded_sum(h, config.encoding)
    result = scaling_experiment(ham, config.encoding, seed=config.seed,
                                max_workers=4)
    csv_path = os.path.join(config.out, "scaling.csv")
    _write_csv(csv_path, ("shots_per_term", "rms_relative_error"),
               result.rows)
    payload = {
        "encoding": result.encoding,
        "exponent": result.exponent,
        "constant": result.constant,
        "repeats": result.repeats,
        "rows": [list(r) for r in result.rows],
        "provenance": provenance(config),
    }
    json_path = os.path.join(config.out, "scaling.json")
    _write_json(json_path, payload)
    print(f"scaling [{config.encoding}]: shots ~ "
          f"{result.constant:.1f} / eps^{result.exponent:.3f} "
          f"({result.repeats} repeats per point)")
    print(f"wrote {csv_path}, {json_path}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blfqvqe",
        description="Valence light-front pion on qubits: Hamiltonian, "
                    "VQE, and observables.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--encoding", choices=ENCODINGS)
        p.add_argument("--mode", choices=CLI_MODES)
        p.add_argument("--shots", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--noise-p01", dest="noise_p01", type=float)
        p.add_argument("--noise-p10", dest="noise_p10", type=float)
        p.add_argument("--mitigate", action="store_const", const=True,
                       default=None)
        p.add_argument("--out", help=f"output directory (default from "
                                     f"${OUT_ENV}, else '.')")
        p.add_argument("--mq", dest="m", type=float,
                       help="quark mass in MeV")
        p.add_argument("--mbar", type=float, help="antiquark mass in MeV")
        p.add_argument("--kappa", type=float,
                       help="confinement strength in MeV")
        p.add_argument("--b", type=float, help="basis scale in MeV")
        p.add_argument("--gpi", dest="g_pi", type=float,
                       help="contact coupling in MeV^-2")
        p.add_argument("--optimizer",
                       choices=("simplex", "linear-trust-region"))
        p.add_argument("--max-iterations", dest="max_iterations", type=int)
        p.add_argument("--tolerance", type=float)

    add_common(sub.add_parser("hamiltonian",
                              help="matrix, spectrum, Pauli decompositions"))
    add_common(sub.add_parser("vqe", help="variational ground-state search"))
    obs = sub.add_parser("observables",
                         help="decay constant, radii, PDF, form factor")
    add_common(obs)
    obs.add_argument("--exact", action="store_true",
                     help="use the exact ground state instead of VQE angles")
    obs.add_argument("--angles",
                     help="vqe_result.json path (default: <out>/vqe_result.json)")
    add_common(sub.add_parser("scaling", help="shots-vs-error scaling table"))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        os.makedirs(config.out, exist_ok=True)
        if args.command == "hamiltonian":
            return cmd_hamiltonian(config)
        if args.command == "vqe":
            return cmd_vqe(config)
        if args.command == "observables":
            return cmd_observables(config, args)
        return cmd_scaling(config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, ValueError,
            np.linalg.LinAlgError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
