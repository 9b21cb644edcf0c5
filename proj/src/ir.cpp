#include "ampopt/ir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ampopt {

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::RZ: return "rz";
        case GateKind::SX: return "sx";
        case GateKind::CX: return "cx";
        case GateKind::X: return "x";
        case GateKind::H: return "h";
        case GateKind::MCPHASE: return "mcphase";
    }
    return "?";
}

GateOp make_rz(int qubit, double angle) { return GateOp{GateKind::RZ, {qubit}, angle}; }
GateOp make_sx(int qubit) { return GateOp{GateKind::SX, {qubit}, 0.0}; }
GateOp make_cx(int control, int target) { return GateOp{GateKind::CX, {control, target}, 0.0}; }
GateOp make_x(int qubit) { return GateOp{GateKind::X, {qubit}, 0.0}; }
GateOp make_h(int qubit) { return GateOp{GateKind::H, {qubit}, 0.0}; }
GateOp make_mcphase(std::vector<int> qubits, double angle) {
    return GateOp{GateKind::MCPHASE, std::move(qubits), angle};
}

std::size_t state_index(const std::string& bits, int n) {
    if (static_cast<int>(bits.size()) != n)
        throw std::invalid_argument("state '" + bits + "' is not " + std::to_string(n) + " bits long");
    std::size_t idx = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("state '" + bits + "' contains non-binary character");
        idx = (idx << 1) | static_cast<std::size_t>(ch == '1');
    }
    return idx;
}

std::string state_bits(std::size_t index, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j)
        if (index >> j & 1) s[static_cast<std::size_t>(n - 1 - j)] = '1';
    return s;
}

std::vector<std::size_t> marked_indices(const MarkedSet& marked) {
    std::vector<std::size_t> out;
    out.reserve(marked.states.size());
    for (const auto& s : marked.states) out.push_back(state_index(s, marked.n));
    return out;
}

namespace {

int expected_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CX: return 2;
        case GateKind::MCPHASE: return -1; // any >= 1
        default: return 1;
    }
}

void check_gate(const GateOp& g, int n, std::size_t index, std::vector<std::string>& out) {
    const std::string where = "gate " + std::to_string(index) + " (" + gate_name(g.kind) + ")";
    const int arity = expected_arity(g.kind);
    if (arity >= 0 && static_cast<int>(g.qubits.size()) != arity)
        out.push_back(where + ": arity mismatch, expected " + std::to_string(arity) +
                      " qubit(s), got " + std::to_string(g.qubits.size()));
    if (g.kind == GateKind::MCPHASE && g.qubits.empty())
        out.push_back(where + ": mcphase needs at least one qubit");
    for (int q : g.qubits)
        if (q < 0 || q >= n)
            out.push_back(where + ": qubit " + std::to_string(q) + " out of range for n=" + std::to_string(n));
    auto sorted = g.qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        out.push_back(where + ": duplicate qubit");
    if ((g.kind == GateKind::RZ || g.kind == GateKind::MCPHASE) && !std::isfinite(g.angle))
        out.push_back(where + ": angle not finite");
}

} // namespace

std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> out;
    if (c.n < 1) out.push_back("qubit count must be positive");
    for (std::size_t i = 0; i < c.gates.size(); ++i) check_gate(c.gates[i], c.n, i, out);

    if (c.meta) {
        const auto& m = *c.meta;
        if (m.n != c.n)
            out.push_back("meta qubit count " + std::to_string(m.n) + " differs from circuit n");
        const double N = std::ldexp(1.0, m.n);
        if (m.m < 1 || static_cast<double>(m.m) >= N)
            out.push_back("marked count m out of range [1, 2^n)");
        else if (std::abs(m.theta - std::asin(std::sqrt(static_cast<double>(m.m) / N))) > 1e-12)
            out.push_back("theta inconsistent with arcsin(sqrt(m/2^n))");
        if (m.t_opt < 1) out.push_back("t_opt must be >= 1");
    }
    if (!c.segments.empty() && !c.meta)
        out.push_back("segments present without amplification meta");

    std::size_t cursor = c.preamble_end();
    for (std::size_t i = 0; i < c.segments.size(); ++i) {
        const auto& s = c.segments[i];
        if (s.begin > s.end)
            out.push_back("segment " + std::to_string(i + 1) + " has begin > end");
        if (s.begin < cursor)
            out.push_back("segments overlap at segment " + std::to_string(i + 1));
        else if (s.begin > cursor)
            out.push_back("gap before segment " + std::to_string(i + 1));
        cursor = std::max(cursor, s.end);
    }
    if (!c.segments.empty()) {
        if (c.segments.back().end != c.gates.size())
            out.push_back("gates after the last segment");
        if (c.segments.back().end > c.gates.size())
            out.push_back("segment range past end of gate list");
    }
    return out;
}

Circuit iteration_segment(const Circuit& c, int t) {
    if (t < 1 || static_cast<std::size_t>(t) > c.segments.size())
        throw std::out_of_range("iteration " + std::to_string(t) + " out of range, circuit has " +
                                std::to_string(c.segments.size()) + " segment(s)");
    const Segment& s = c.segments[static_cast<std::size_t>(t - 1)];
    Circuit frag;
    frag.n = c.n;
    frag.gates.assign(c.gates.begin() + static_cast<std::ptrdiff_t>(s.begin),
                      c.gates.begin() + static_cast<std::ptrdiff_t>(s.end));
    return frag;
}

Circuit truncate_after(const Circuit& c, int t) {
    if (t < 0 || static_cast<std::size_t>(t) > c.segments.size())
        throw std::out_of_range("cannot keep " + std::to_string(t) + " iteration(s), circuit has " +
                                std::to_string(c.segments.size()));
    Circuit out;
    out.n = c.n;
    out.meta = c.meta;
    const std::size_t keep = static_cast<std::size_t>(t) == 0
                                 ? c.preamble_end()
                                 : c.segments[static_cast<std::size_t>(t - 1)].end;
    out.gates.assign(c.gates.begin(), c.gates.begin() + static_cast<std::ptrdiff_t>(keep));
    out.segments.assign(c.segments.begin(), c.segments.begin() + t);
    return out;
}

void append_segment(Circuit& c, const Circuit& fragment) {
    if (fragment.n > c.n)
        throw std::invalid_argument("fragment acts on more qubits than the circuit has");
    Segment s{c.gates.size(), c.gates.size() + fragment.gates.size()};
    c.gates.insert(c.gates.end(), fragment.gates.begin(), fragment.gates.end());
    c.segments.push_back(s);
}

} // namespace ampopt
