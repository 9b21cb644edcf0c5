#pragma once

#include "ampopt/ir.hpp"
#include "ampopt/noise.hpp"

#include <complex>
#include <cstdint>
#include <span>

namespace ampopt::sim {

using cdouble = std::complex<double>;

/// Dense 2^n x 2^n density matrix, row-major. Starts in |0...0><0...0|.
class DensityMatrix {
public:
    explicit DensityMatrix(int n);
    static DensityMatrix maximally_mixed(int n);

    int num_qubits() const { return n_; }
    std::size_t dim() const { return dim_; }

    cdouble& at(std::size_t row, std::size_t col) { return a_[row * dim_ + col]; }
    const cdouble& at(std::size_t row, std::size_t col) const { return a_[row * dim_ + col]; }
    cdouble* data() { return a_.data(); }
    const cdouble* data() const { return a_.data(); }

    double trace_real() const;
    void scale(double factor);
    std::vector<double> diagonal() const;

private:
    int n_;
    std::size_t dim_;
    std::vector<cdouble> a_;
};

/// rho -> U rho U^dag for one gate. Supports all GateKinds (MCPHASE included).
void apply_gate(DensityMatrix& rho, const GateOp& g);

/// Local depolarizing channel on the listed qubits:
/// rho -> (1 - lambda) rho + lambda (Tr_q[rho] (x) I/2^k) in original layout.
void apply_depolarizing(DensityMatrix& rho, std::span<const int> qubits, double lambda);

struct OutcomeDistribution {
    int n = 0;
    std::vector<double> probabilities;
};

double success_probability(const OutcomeDistribution& dist, const MarkedSet& marked);

struct SimStats {
    std::uint64_t operations = 0;
    std::uint64_t renormalizations = 0; // recorded trace-drift corrections
    double max_trace_drift = 0.0;       // worst |Tr rho - 1| seen at a checkpoint
};

/// Exact noisy evolution through the preamble and iterations 1..upto, the
/// depolarizing channel applied after every gate with that gate's parameter.
OutcomeDistribution simulate(const Circuit& c, const noise::NoiseProfile& profile, int upto,
                             SimStats* stats = nullptr);

struct SweepPoint {
    int t = 0;
    double observed_success = 0.0;
};

/// Observed success after t = 0..T iterations, evolving one density matrix
/// incrementally across the sweep.
std::vector<SweepPoint> sweep(const Circuit& c, const noise::NoiseProfile& profile,
                              const MarkedSet& marked, SimStats* stats = nullptr);

/// Monte Carlo Pauli-trajectory sampler: per gate, with probability
/// P = lambda (4^a - 1)/4^a a uniformly random non-identity Pauli is applied
/// on the gate's qubits. One measured outcome per shot; deterministic for a
/// given seed regardless of thread count.
OutcomeDistribution trajectory_sample(const Circuit& c, const noise::NoiseProfile& profile,
                                      std::uint64_t shots, std::uint64_t seed);

/// Plain statevector engine; used by the trajectory sampler and handy as an
/// oracle for unitary-level checks.
class StateVector {
public:
    explicit StateVector(int n);

    int num_qubits() const { return n_; }
    std::vector<cdouble>& amplitudes() { return a_; }
    const std::vector<cdouble>& amplitudes() const { return a_; }

    void apply(const GateOp& g);
    /// pauli: 1 = X, 2 = Y, 3 = Z.
    void apply_pauli(int pauli, int qubit);
    std::vector<double> probabilities() const;

private:
    int n_;
    std::vector<cdouble> a_;
};

} // namespace ampopt::sim
