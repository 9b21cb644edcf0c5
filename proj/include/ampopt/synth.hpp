#pragma once

#include "ampopt/ir.hpp"

namespace ampopt::synth {

/// Problem description for the circuit builder. iterations_override builds
/// that many iterations instead of the noiseless optimum.
struct GroverSpec {
    int n = 0;
    MarkedSet marked;
    std::optional<int> iterations_override;
};

struct GroverParams {
    double theta;
    int t_opt;
};

/// theta = arcsin(sqrt(m/2^n)) and the noiseless optimal iteration count
/// t_opt = round(arccos(sqrt(m/2^n)) / (2 arcsin(sqrt(m/2^n)))), clamped to 1.
GroverParams grover_params(int m, int n);

/// Phase flip on each marked state, X-conjugated MCPHASE(pi) per state,
/// lowered to {rz, sx, cx}.
Circuit build_oracle(const MarkedSet& marked);

/// Reflection about the uniform superposition (up to global phase),
/// lowered to {rz, sx, cx}.
Circuit build_diffuser(int n);

/// Rewrites H, X and MCPHASE gates over {rz, sx, cx}; the fragment unitary
/// is preserved up to global phase.
Circuit lower_to_basis(const Circuit& fragment);

/// H preamble followed by t_opt (or overridden) oracle+diffuser iterations,
/// fully lowered and instrumented with meta and one segment per iteration.
Circuit build_amplification_circuit(const GroverSpec& spec);

} // namespace ampopt::synth
