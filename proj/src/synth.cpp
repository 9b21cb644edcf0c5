#include "ampopt/synth.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ampopt::synth {

namespace {

constexpr double kPi = std::numbers::pi;

void push_h(std::vector<GateOp>& out, int q) {
    out.push_back(make_rz(q, kPi / 2));
    out.push_back(make_sx(q));
    out.push_back(make_rz(q, kPi / 2));
}

void push_x(std::vector<GateOp>& out, int q) {
    out.push_back(make_sx(q));
    out.push_back(make_sx(q));
}

// Diagonal phase `angle` on the all-ones subspace of `qubits`, emitted over
// {rz, cx} with no ancilla. The phase polynomial of an AND of k bits expands
// over parities of all non-empty qubit subsets; subsets containing the last
// qubit are walked in Gray-code order with the running parity accumulated on
// that qubit, the rest recurse on k-1 qubits with the angle halved.
void push_mcphase(std::vector<GateOp>& out, const std::vector<int>& qubits, double angle) {
    const int k = static_cast<int>(qubits.size());
    if (k == 1) {
        out.push_back(make_rz(qubits[0], angle));
        return;
    }
    const int target = qubits.back();
    const int m = k - 1;
    const double coeff = std::ldexp(angle, -(k - 1));

    out.push_back(make_rz(target, coeff));
    unsigned prev = 0;
    for (unsigned i = 1; i < (1u << m); ++i) {
        const unsigned gray = i ^ (i >> 1);
        const int toggled = std::countr_zero(gray ^ prev);
        out.push_back(make_cx(qubits[static_cast<std::size_t>(toggled)], target));
        prev = gray;
        const double sign = (std::popcount(gray) % 2 == 0) ? 1.0 : -1.0;
        out.push_back(make_rz(target, sign * coeff));
    }
    for (int b = 0; b < m; ++b)
        if (prev >> b & 1) out.push_back(make_cx(qubits[static_cast<std::size_t>(b)], target));

    std::vector<int> rest(qubits.begin(), qubits.end() - 1);
    push_mcphase(out, rest, angle / 2);
}

} // namespace

GroverParams grover_params(int m, int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("qubit count out of range");
    const double N = std::ldexp(1.0, n);
    if (m < 1 || static_cast<double>(m) >= N)
        throw std::invalid_argument("marked count " + std::to_string(m) +
                                    " out of range [1, 2^" + std::to_string(n) + ")");
    const double amplitude = std::sqrt(static_cast<double>(m) / N);
    const double theta = std::asin(amplitude);
    const double ratio = std::acos(amplitude) / (2.0 * theta);
    const int t_opt = std::max(1, static_cast<int>(std::llround(ratio)));
    return {theta, t_opt};
}

Circuit build_oracle(const MarkedSet& marked) {
    if (marked.states.empty()) throw std::invalid_argument("marked set is empty");
    Circuit frag;
    frag.n = marked.n;
    std::vector<int> all(static_cast<std::size_t>(marked.n));
    for (int q = 0; q < marked.n; ++q) all[static_cast<std::size_t>(q)] = q;

    for (std::size_t w : marked_indices(marked)) {
        std::vector<int> conjugated;
        for (int q = 0; q < marked.n; ++q)
            if (!(w >> q & 1)) conjugated.push_back(q);
        for (int q : conjugated) push_x(frag.gates, q);
        push_mcphase(frag.gates, all, kPi);
        for (int q : conjugated) push_x(frag.gates, q);
    }
    return frag;
}

Circuit build_diffuser(int n) {
    if (n < 2) throw std::invalid_argument("diffuser needs at least two qubits");
    Circuit frag;
    frag.n = n;
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;

    for (int q = 0; q < n; ++q) push_h(frag.gates, q);
    for (int q = 0; q < n; ++q) push_x(frag.gates, q);
    push_mcphase(frag.gates, all, kPi);
    for (int q = 0; q < n; ++q) push_x(frag.gates, q);
    for (int q = 0; q < n; ++q) push_h(frag.gates, q);
    return frag;
}

Circuit lower_to_basis(const Circuit& fragment) {
    Circuit out;
    out.n = fragment.n;
    for (const GateOp& g : fragment.gates) {
        switch (g.kind) {
            case GateKind::RZ:
            case GateKind::SX:
            case GateKind::CX:
                out.gates.push_back(g);
                break;
            case GateKind::H:
                push_h(out.gates, g.qubits[0]);
                break;
            case GateKind::X:
                push_x(out.gates, g.qubits[0]);
                break;
            case GateKind::MCPHASE:
                push_mcphase(out.gates, g.qubits, g.angle);
                break;
        }
    }
    return out;
}

Circuit build_amplification_circuit(const GroverSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("need at least two qubits");
    if (spec.marked.n != spec.n) throw std::invalid_argument("marked set qubit count differs from n");
    const int m = static_cast<int>(spec.marked.states.size());
    const GroverParams params = grover_params(m, spec.n);
    const int iterations = spec.iterations_override.value_or(params.t_opt);
    if (iterations < 0) throw std::invalid_argument("iteration override must be non-negative");

    Circuit c;
    c.n = spec.n;
    c.meta = AmplificationMeta{params.theta, params.t_opt, m, spec.n};
    for (int q = 0; q < spec.n; ++q) push_h(c.gates, q);

    const Circuit oracle = build_oracle(spec.marked);
    const Circuit diffuser = build_diffuser(spec.n);
    Circuit iteration;
    iteration.n = spec.n;
    iteration.gates = oracle.gates;
    iteration.gates.insert(iteration.gates.end(), diffuser.gates.begin(), diffuser.gates.end());

    for (int t = 0; t < iterations; ++t) append_segment(c, iteration);
    return c;
}

} // namespace ampopt::synth
