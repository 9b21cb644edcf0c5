#include "ampopt/predict.hpp"

#include <cmath>
#include <stdexcept>

namespace ampopt::predict {

double amplification_at(double theta, int t) {
    if (t < 0) throw std::invalid_argument("iteration index must be non-negative");
    const double s = std::sin(static_cast<double>(2 * t + 1) * theta);
    return std::min(1.0, std::max(0.0, s * s));
}

PredictionCurve predict_curve(const Circuit& c, const noise::NoiseProfile& profile,
                              const PredictOptions& options) {
    if (!c.meta) throw std::invalid_argument("circuit carries no amplification meta");
    if (c.segments.empty()) throw std::invalid_argument("circuit has no iteration segments");

    PredictionCurve curve;
    curve.theta = c.meta->theta;

    double cumulative = 0.0;
    if (options.include_preamble_noise) {
        Circuit preamble;
        preamble.n = c.n;
        preamble.gates.assign(c.gates.begin(),
                              c.gates.begin() + static_cast<std::ptrdiff_t>(c.preamble_end()));
        cumulative = noise::calculate_noise(preamble, profile).noise_rate;
    }
    curve.baseline_success = amplification_at(curve.theta, 0) * (1.0 - cumulative);

    const int total = static_cast<int>(c.segments.size());
    curve.points.reserve(static_cast<std::size_t>(total));
    for (int t = 1; t <= total; ++t) {
        const double segment_noise =
            noise::calculate_noise(iteration_segment(c, t), profile).noise_rate;
        cumulative = 1.0 - (1.0 - cumulative) * (1.0 - segment_noise);
        PredictionPoint pt;
        pt.t = t;
        pt.amplification = amplification_at(curve.theta, t);
        pt.cumulative_noise = cumulative;
        pt.estimated_success = pt.amplification * (1.0 - cumulative);
        curve.points.push_back(pt);
    }
    curve.inflection = find_inflection(curve, Criterion::Peak);
    return curve;
}

int find_inflection(const PredictionCurve& curve, Criterion criterion) {
    if (criterion == Criterion::Literal) {
        for (const PredictionPoint& pt : curve.points)
            if (pt.amplification <= pt.cumulative_noise) return pt.t - 1;
        return curve.points.empty() ? 0 : curve.points.back().t;
    }
    int best_t = 0;
    double best = curve.baseline_success;
    for (const PredictionPoint& pt : curve.points) {
        if (pt.estimated_success > best) {
            best = pt.estimated_success;
            best_t = pt.t;
        }
    }
    return best_t;
}

OptimizeResult optimize_circuit(const Circuit& c, const noise::NoiseProfile& profile,
                                Criterion criterion, const PredictOptions& options) {
    PredictionCurve curve = predict_curve(c, profile, options);
    curve.inflection = find_inflection(curve, criterion);
    return OptimizeResult{truncate_after(c, curve.inflection), std::move(curve)};
}

} // namespace ampopt::predict
