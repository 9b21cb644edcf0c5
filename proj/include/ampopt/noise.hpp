#pragma once

#include "ampopt/ir.hpp"

#include <map>

namespace ampopt::noise {

/// Largest admissible depolarizing parameter for a gate of the given arity:
/// 4^a / (4^a - 1).
double lambda_bound(int arity);

/// Error probability from a depolarizing parameter: P = lambda (4^a - 1) / 4^a
/// with a the gate arity (1 or 2). Throws on out-of-bound lambda.
double lambda_to_p(double lambda, int arity);

/// Per-gate-kind depolarizing parameters, with optional per-position
/// overrides keyed by (kind, exact qubit tuple).
struct NoiseProfile {
    std::string name;
    std::map<GateKind, double> lambda_by_kind;
    std::map<std::pair<GateKind, std::vector<int>>, double> per_position;

    /// Parameter for a concrete gate; throws std::invalid_argument when the
    /// kind has no entry (missing kinds are never treated as zero noise).
    double lambda_for(const GateOp& g) const;
};

struct SegmentNoise {
    double noise_rate = 0.0; // probability at least one gate depolarized
};

/// Probability that at least one gate in the fragment depolarized:
/// 1 - prod(1 - p_g). Order-independent and deterministic.
SegmentNoise calculate_noise(const Circuit& segment, const NoiseProfile& profile);

/// Fragment with exactly the requested number of gates per kind on
/// placeholder qubits, for reproducing published per-iteration gate counts.
Circuit synthetic_segment(const std::map<GateKind, std::size_t>& counts);

/// Loads and validates the profile JSON schema:
/// {"name": str, "lambda": {"rz": num, "sx": num, "cx": num},
///  "overrides": [{"kind": str, "qubits": [ints], "lambda": num}]}
NoiseProfile parse_profile(const std::string& json_text);
NoiseProfile load_profile(const std::string& path);

} // namespace ampopt::noise
