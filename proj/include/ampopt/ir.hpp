#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ampopt {

enum class GateKind : uint8_t { RZ, SX, CX, X, H, MCPHASE };

const char* gate_name(GateKind kind);

/// One basis-gate application. `angle` is meaningful for RZ and MCPHASE only.
struct GateOp {
    GateKind kind;
    std::vector<int> qubits;
    double angle = 0.0;

    bool operator==(const GateOp&) const = default;
};

GateOp make_rz(int qubit, double angle);
GateOp make_sx(int qubit);
GateOp make_cx(int control, int target);
GateOp make_x(int qubit);
GateOp make_h(int qubit);
GateOp make_mcphase(std::vector<int> qubits, double angle);

/// Amplification parameters attached to an instrumented circuit.
/// theta is the initial amplitude angle arcsin(sqrt(m / 2^n)); t_opt is the
/// noiseless optimal iteration count derived from it.
struct AmplificationMeta {
    double theta = 0.0;
    int t_opt = 0;
    int m = 0;
    int n = 0;

    bool operator==(const AmplificationMeta&) const = default;
};

/// Half-open range [begin, end) of gate indices forming one iteration.
struct Segment {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Segment&) const = default;
};

/// Ordered gate list over n qubits. When instrumented, `meta` holds the
/// amplification parameters and `segments` the per-iteration gate ranges;
/// everything before segment 1 is the preamble. Uninstrumented circuits
/// (fragments, plain files) have no meta and no segments.
struct Circuit {
    int n = 0;
    std::vector<GateOp> gates;
    std::optional<AmplificationMeta> meta;
    std::vector<Segment> segments;

    /// Gate index at which the preamble ends (== begin of segment 1).
    std::size_t preamble_end() const {
        return segments.empty() ? gates.size() : segments.front().begin;
    }

    bool operator==(const Circuit&) const = default;
};

/// Set of marked (winning) basis states, as n-bit strings, most significant
/// qubit first: "11010" on 5 qubits is the basis state with index 26.
struct MarkedSet {
    int n = 0;
    std::set<std::string> states;

    bool operator==(const MarkedSet&) const = default;
};

/// Basis-state index of an n-bit string (throws on bad length/characters).
std::size_t state_index(const std::string& bits, int n);
std::string state_bits(std::size_t index, int n);

std::vector<std::size_t> marked_indices(const MarkedSet& marked);

/// Collects every invariant violation; an empty list means the circuit is
/// valid. Never throws, never mutates.
std::vector<std::string> validate(const Circuit& c);

/// Gates of iteration t (1-based) as a standalone fragment: same n, no meta,
/// no segments. Throws std::out_of_range for t outside [1, segment count].
Circuit iteration_segment(const Circuit& c, int t);

/// Keeps the preamble and iterations 1..t, drops everything after; meta is
/// preserved. t = 0 yields the preamble-only circuit. Throws
/// std::out_of_range for t > segment count.
Circuit truncate_after(const Circuit& c, int t);

/// Appends a fragment's gates as one new iteration segment.
void append_segment(Circuit& c, const Circuit& fragment);

} // namespace ampopt
