#pragma once

#include "ampopt/ir.hpp"
#include "ampopt/noise.hpp"

namespace ampopt::predict {

struct PredictionPoint {
    int t = 0;
    double amplification = 0.0;    // sin^2((2t+1) theta)
    double cumulative_noise = 0.0; // probability any gate so far depolarized
    double estimated_success = 0.0; // amplification * (1 - cumulative_noise)
};

struct PredictionCurve {
    double theta = 0.0;
    double baseline_success = 0.0; // estimated success at t = 0 (no iteration)
    std::vector<PredictionPoint> points; // t = 1..T
    int inflection = 0;                  // selected optimal iteration t*
};

/// How the optimal iteration is chosen from a curve. Peak takes the argmax of
/// estimated success over t = 0..T. Literal stops at the first iteration
/// whose cumulative noise reaches the amplification and keeps the iterations
/// before it; it is kept for comparison and under-predicts on published data.
enum class Criterion { Peak, Literal };

struct PredictOptions {
    bool include_preamble_noise = false;
};

/// Noise-free success probability after t iterations, clamped to [0, 1].
double amplification_at(double theta, int t);

/// Per-iteration amplification/noise/estimated-success records for an
/// instrumented circuit. Runtime is linear in the total gate count.
/// Throws std::invalid_argument without meta or segments.
PredictionCurve predict_curve(const Circuit& c, const noise::NoiseProfile& profile,
                              const PredictOptions& options = {});

/// Optimal iteration count per the criterion; 0 means even one iteration is
/// predicted worse than the bare superposition. Ties go to smaller t.
int find_inflection(const PredictionCurve& curve, Criterion criterion = Criterion::Peak);

struct OptimizeResult {
    Circuit circuit;
    PredictionCurve curve;
};

/// Truncates the circuit at the predicted inflection point and returns it
/// together with the curve that justified the cut.
OptimizeResult optimize_circuit(const Circuit& c, const noise::NoiseProfile& profile,
                                Criterion criterion = Criterion::Peak,
                                const PredictOptions& options = {});

} // namespace ampopt::predict
