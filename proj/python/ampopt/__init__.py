"""Noise-aware transpiler toolkit for amplitude amplification circuits.

Synthesize Grover-style circuits instrumented with iteration intrinsics,
predict per-iteration accuracy under depolarizing gate noise by pure
analysis, truncate at the predicted inflection point, and validate against
an exact density-matrix simulator.
"""

from ampopt._core import (
    Circuit,
    NoiseProfile,
    PredictionCurve,
    PredictionPoint,
    __version__,
    amplification_at,
    build_circuit,
    calculate_noise,
    emit,
    find_inflection,
    grover_params,
    lambda_to_p,
    load_circuit,
    load_profile,
    optimize_circuit,
    parse,
    predict_curve,
    profile_from_json,
    save_circuit,
    simulate,
    success_probability,
    sweep,
    trajectory_sample,
    uniform_profile,
)

__all__ = [
    "Circuit",
    "NoiseProfile",
    "PredictionCurve",
    "PredictionPoint",
    "__version__",
    "amplification_at",
    "build_circuit",
    "calculate_noise",
    "emit",
    "find_inflection",
    "grover_params",
    "lambda_to_p",
    "load_circuit",
    "load_profile",
    "optimize_circuit",
    "parse",
    "predict_curve",
    "profile_from_json",
    "save_circuit",
    "simulate",
    "success_probability",
    "sweep",
    "trajectory_sample",
    "uniform_profile",
]
