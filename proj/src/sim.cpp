#include "ampopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace ampopt::sim {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct Gate2x2 {
    cdouble u00, u01, u10, u11;
};

Gate2x2 sx_matrix() {
    return {cdouble(0.5, 0.5), cdouble(0.5, -0.5), cdouble(0.5, -0.5), cdouble(0.5, 0.5)};
}

Gate2x2 h_matrix() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {cdouble(s, 0), cdouble(s, 0), cdouble(s, 0), cdouble(-s, 0)};
}

void check_gate(const GateOp& g, int n) {
    const int arity = static_cast<int>(g.qubits.size());
    const int expected = g.kind == GateKind::CX ? 2 : (g.kind == GateKind::MCPHASE ? arity : 1);
    if (arity != expected || arity < 1)
        throw std::invalid_argument(std::string("bad arity for gate '") + gate_name(g.kind) + "'");
    std::size_t mask = 0;
    for (int q : g.qubits) {
        if (q < 0 || q >= n)
            throw std::invalid_argument("qubit index out of range in gate '" +
                                        std::string(gate_name(g.kind)) + "'");
        const std::size_t bit = std::size_t(1) << q;
        if (mask & bit) throw std::invalid_argument("duplicate qubit in gate");
        mask |= bit;
    }
}

std::size_t permute_cx(std::size_t i, std::size_t control_mask, std::size_t target_mask) {
    return (i & control_mask) ? i ^ target_mask : i;
}

// --- density matrix kernels -------------------------------------------------

void dm_apply_1q(DensityMatrix& rho, int q, const Gate2x2& u) {
    const std::size_t D = rho.dim();
    const std::size_t m = std::size_t(1) << q;
    cdouble* A = rho.data();
    // left multiply by U, streaming over row pairs
    for (std::size_t base = 0; base < D; base += 2 * m) {
        for (std::size_t off = 0; off < m; ++off) {
            cdouble* p0 = A + (base + off) * D;
            cdouble* p1 = p0 + m * D;
            for (std::size_t c = 0; c < D; ++c) {
                const cdouble a = p0[c], b = p1[c];
                p0[c] = u.u00 * a + u.u01 * b;
                p1[c] = u.u10 * a + u.u11 * b;
            }
        }
    }
    // right multiply by U^dag, per row over column pairs
    const cdouble c00 = std::conj(u.u00), c01 = std::conj(u.u01);
    const cdouble c10 = std::conj(u.u10), c11 = std::conj(u.u11);
    for (std::size_t r = 0; r < D; ++r) {
        cdouble* row = A + r * D;
        for (std::size_t base = 0; base < D; base += 2 * m) {
            for (std::size_t off = 0; off < m; ++off) {
                const std::size_t c0 = base + off;
                const cdouble a = row[c0], b = row[c0 + m];
                row[c0] = a * c00 + b * c01;
                row[c0 + m] = a * c10 + b * c11;
            }
        }
    }
}

template <typename Phase>
void dm_apply_diagonal(DensityMatrix& rho, Phase&& phase) {
    const std::size_t D = rho.dim();
    std::vector<cdouble> d(D);
    for (std::size_t i = 0; i < D; ++i) d[i] = phase(i);
    cdouble* A = rho.data();
    for (std::size_t r = 0; r < D; ++r) {
        const cdouble pr = d[r];
        cdouble* row = A + r * D;
        for (std::size_t c = 0; c < D; ++c) row[c] *= pr * std::conj(d[c]);
    }
}

template <typename Perm>
void dm_apply_permutation(DensityMatrix& rho, Perm&& perm) {
    const std::size_t D = rho.dim();
    cdouble* A = rho.data();
    for (std::size_t i = 0; i < D; ++i) {
        const std::size_t j = perm(i);
        if (j > i) std::swap_ranges(A + i * D, A + (i + 1) * D, A + j * D);
    }
    for (std::size_t r = 0; r < D; ++r) {
        cdouble* row = A + r * D;
        for (std::size_t i = 0; i < D; ++i) {
            const std::size_t j = perm(i);
            if (j > i) std::swap(row[i], row[j]);
        }
    }
}

// --- shared evolution driver ------------------------------------------------

void drift_check(DensityMatrix& rho, SimStats& stats) {
    ++stats.operations;
    const double tr = rho.trace_real();
    const double drift = std::abs(tr - 1.0);
    stats.max_trace_drift = std::max(stats.max_trace_drift, drift);
    if (stats.operations % 1000 == 0 && drift > 1e-12) {
        rho.scale(1.0 / tr);
        ++stats.renormalizations;
    }
}

void run_gates(DensityMatrix& rho, const Circuit& c, std::size_t from, std::size_t to,
               const noise::NoiseProfile& profile, SimStats& stats) {
    for (std::size_t i = from; i < to; ++i) {
        const GateOp& g = c.gates[i];
        const double lambda = profile.lambda_for(g);
        apply_gate(rho, g);
        drift_check(rho, stats);
        if (lambda > 0.0) {
            apply_depolarizing(rho, g.qubits, lambda);
            drift_check(rho, stats);
        }
    }
}

OutcomeDistribution to_distribution(const DensityMatrix& rho) {
    OutcomeDistribution dist;
    dist.n = rho.num_qubits();
    dist.probabilities = rho.diagonal();
    for (double& p : dist.probabilities) p = std::max(0.0, p);
    return dist;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

// --- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(int n) : n_(n) {
    if (n < 1 || n > 14) throw std::invalid_argument("density matrix supports 1..14 qubits");
    dim_ = std::size_t(1) << n;
    a_.assign(dim_ * dim_, cdouble{});
    a_[0] = 1.0;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    DensityMatrix rho(n);
    rho.a_[0] = 0.0;
    const double p = 1.0 / static_cast<double>(rho.dim_);
    for (std::size_t i = 0; i < rho.dim_; ++i) rho.at(i, i) = p;
    return rho;
}

double DensityMatrix::trace_real() const {
    double tr = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) tr += at(i, i).real();
    return tr;
}

void DensityMatrix::scale(double factor) {
    for (cdouble& v : a_) v *= factor;
}

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = at(i, i).real();
    return d;
}

// --- gates and channels -------------------------------------------------------

void apply_gate(DensityMatrix& rho, const GateOp& g) {
    check_gate(g, rho.num_qubits());
    switch (g.kind) {
        case GateKind::RZ: {
            const std::size_t m = std::size_t(1) << g.qubits[0];
            const cdouble lo = std::exp(-kI * (g.angle / 2)), hi = std::exp(kI * (g.angle / 2));
            dm_apply_diagonal(rho, [&](std::size_t i) { return (i & m) ? hi : lo; });
            break;
        }
        case GateKind::MCPHASE: {
            std::size_t mask = 0;
            for (int q : g.qubits) mask |= std::size_t(1) << q;
            const cdouble ph = std::exp(kI * g.angle);
            dm_apply_diagonal(rho, [&](std::size_t i) { return (i & mask) == mask ? ph : cdouble{1.0}; });
            break;
        }
        case GateKind::SX: dm_apply_1q(rho, g.qubits[0], sx_matrix()); break;
        case GateKind::H: dm_apply_1q(rho, g.qubits[0], h_matrix()); break;
        case GateKind::X: {
            const std::size_t m = std::size_t(1) << g.qubits[0];
            dm_apply_permutation(rho, [m](std::size_t i) { return i ^ m; });
            break;
        }
        case GateKind::CX: {
            const std::size_t cm = std::size_t(1) << g.qubits[0];
            const std::size_t tm = std::size_t(1) << g.qubits[1];
            dm_apply_permutation(rho, [cm, tm](std::size_t i) { return permute_cx(i, cm, tm); });
            break;
        }
    }
}

void apply_depolarizing(DensityMatrix& rho, std::span<const int> qubits, double lambda) {
    const int k = static_cast<int>(qubits.size());
    if (k < 1 || k > rho.num_qubits()) throw std::invalid_argument("bad qubit tuple for channel");
    const double four_k = std::ldexp(1.0, 2 * k);
    if (!(lambda >= 0.0) || lambda > four_k / (four_k - 1.0))
        throw std::invalid_argument("depolarizing parameter out of bound");
    if (lambda == 0.0) return;

    const std::size_t D = rho.dim();
    std::size_t full = 0;
    for (int q : qubits) {
        const std::size_t bit = std::size_t(1) << q;
        if (q < 0 || q >= rho.num_qubits() || (full & bit))
            throw std::invalid_argument("bad qubit tuple for channel");
        full |= bit;
    }

    const std::size_t sub_count = std::size_t(1) << k;
    std::vector<std::size_t> subs(sub_count, 0);
    for (std::size_t a = 0; a < sub_count; ++a)
        for (int b = 0; b < k; ++b)
            if (a >> b & 1) subs[a] |= std::size_t(1) << qubits[static_cast<std::size_t>(b)];

    std::vector<std::size_t> rest;
    rest.reserve(D >> k);
    for (std::size_t i = 0; i < D; ++i)
        if ((i & full) == 0) rest.push_back(i);

    const double keep = 1.0 - lambda;
    const double mix = lambda / static_cast<double>(sub_count);
    cdouble* A = rho.data();
    for (std::size_t x : rest) {
        for (std::size_t y : rest) {
            cdouble sigma{};
            for (std::size_t a = 0; a < sub_count; ++a) sigma += A[(x | subs[a]) * D + (y | subs[a])];
            for (std::size_t a = 0; a < sub_count; ++a) {
                cdouble* block = A + (x | subs[a]) * D + y;
                for (std::size_t b = 0; b < sub_count; ++b) block[subs[b]] *= keep;
            }
            sigma *= mix;
            for (std::size_t a = 0; a < sub_count; ++a) A[(x | subs[a]) * D + (y | subs[a])] += sigma;
        }
    }
}

double success_probability(const OutcomeDistribution& dist, const MarkedSet& marked) {
    if (dist.n != marked.n)
        throw std::invalid_argument("distribution and marked set qubit counts differ");
    double p = 0.0;
    for (std::size_t idx : marked_indices(marked)) p += dist.probabilities[idx];
    return p;
}

OutcomeDistribution simulate(const Circuit& c, const noise::NoiseProfile& profile, int upto,
                             SimStats* stats) {
    if (upto < 0 || static_cast<std::size_t>(upto) > c.segments.size())
        throw std::out_of_range("iteration count out of range");
    const std::size_t to =
        upto == 0 ? c.preamble_end() : c.segments[static_cast<std::size_t>(upto - 1)].end;
    DensityMatrix rho(c.n);
    SimStats local;
    run_gates(rho, c, 0, to, profile, stats ? *stats : local);
    return to_distribution(rho);
}

std::vector<SweepPoint> sweep(const Circuit& c, const noise::NoiseProfile& profile,
                              const MarkedSet& marked, SimStats* stats) {
    if (marked.n != c.n) throw std::invalid_argument("marked set qubit count differs from circuit");
    SimStats local;
    SimStats& st = stats ? *stats : local;
    DensityMatrix rho(c.n);
    run_gates(rho, c, 0, c.preamble_end(), profile, st);

    std::vector<SweepPoint> out;
    out.push_back({0, success_probability(to_distribution(rho), marked)});
    for (std::size_t s = 0; s < c.segments.size(); ++s) {
        run_gates(rho, c, c.segments[s].begin, c.segments[s].end, profile, st);
        out.push_back({static_cast<int>(s) + 1, success_probability(to_distribution(rho), marked)});
    }
    return out;
}

// --- StateVector ----------------------------------------------------------------

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > 26) throw std::invalid_argument("statevector supports 1..26 qubits");
    a_.assign(std::size_t(1) << n, cdouble{});
    a_[0] = 1.0;
}

void StateVector::apply(const GateOp& g) {
    check_gate(g, n_);
    const std::size_t D = a_.size();
    switch (g.kind) {
        case GateKind::RZ: {
            const std::size_t m = std::size_t(1) << g.qubits[0];
            const cdouble lo = std::exp(-kI * (g.angle / 2)), hi = std::exp(kI * (g.angle / 2));
            for (std::size_t i = 0; i < D; ++i) a_[i] *= (i & m) ? hi : lo;
            break;
        }
        case GateKind::MCPHASE: {
            std::size_t mask = 0;
            for (int q : g.qubits) mask |= std::size_t(1) << q;
            const cdouble ph = std::exp(kI * g.angle);
            for (std::size_t i = 0; i < D; ++i)
                if ((i & mask) == mask) a_[i] *= ph;
            break;
        }
        case GateKind::SX:
        case GateKind::H: {
            const Gate2x2 u = g.kind == GateKind::SX ? sx_matrix() : h_matrix();
            const std::size_t m = std::size_t(1) << g.qubits[0];
            for (std::size_t base = 0; base < D; base += 2 * m) {
                for (std::size_t off = 0; off < m; ++off) {
                    const std::size_t i0 = base + off;
                    const cdouble a = a_[i0], b = a_[i0 + m];
                    a_[i0] = u.u00 * a + u.u01 * b;
                    a_[i0 + m] = u.u10 * a + u.u11 * b;
                }
            }
            break;
        }
        case GateKind::X: {
            const std::size_t m = std::size_t(1) << g.qubits[0];
            for (std::size_t i = 0; i < D; ++i)
                if (!(i & m)) std::swap(a_[i], a_[i | m]);
            break;
        }
        case GateKind::CX: {
            const std::size_t cm = std::size_t(1) << g.qubits[0];
            const std::size_t tm = std::size_t(1) << g.qubits[1];
            for (std::size_t i = 0; i < D; ++i)
                if ((i & cm) && !(i & tm)) std::swap(a_[i], a_[i | tm]);
            break;
        }
    }
}

void StateVector::apply_pauli(int pauli, int qubit) {
    const std::size_t D = a_.size();
    const std::size_t m = std::size_t(1) << qubit;
    switch (pauli) {
        case 1: // X
            for (std::size_t i = 0; i < D; ++i)
                if (!(i & m)) std::swap(a_[i], a_[i | m]);
            break;
        case 2: // Y
            for (std::size_t i = 0; i < D; ++i)
                if (!(i & m)) {
                    const cdouble a = a_[i], b = a_[i | m];
                    a_[i] = -kI * b;
                    a_[i | m] = kI * a;
                }
            break;
        case 3: // Z
            for (std::size_t i = 0; i < D; ++i)
                if (i & m) a_[i] = -a_[i];
            break;
        default: throw std::invalid_argument("pauli index must be 1..3");
    }
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) p[i] = std::norm(a_[i]);
    return p;
}

// --- trajectory sampler ------------------------------------------------------------

OutcomeDistribution trajectory_sample(const Circuit& c, const noise::NoiseProfile& profile,
                                      std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("need at least one shot");

    struct Step {
        const GateOp* g;
        double p;
    };
    std::vector<Step> steps;
    steps.reserve(c.gates.size());
    for (const GateOp& g : c.gates) {
        const double lambda = profile.lambda_for(g);
        steps.push_back({&g, noise::lambda_to_p(lambda, static_cast<int>(g.qubits.size()))});
    }

    const std::size_t D = std::size_t(1) << c.n;
    const std::uint64_t base = splitmix64(seed);

    auto run_block = [&](std::uint64_t first, std::uint64_t last, std::vector<std::uint64_t>& counts) {
        for (std::uint64_t shot = first; shot < last; ++shot) {
            std::mt19937_64 rng(splitmix64(base ^ (0x9E3779B97F4A7C15ull * (shot + 1))));
            auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            StateVector psi(c.n);
            for (const Step& s : steps) {
                psi.apply(*s.g);
                if (s.p > 0.0 && uniform01() < s.p) {
                    if (s.g->qubits.size() == 1) {
                        psi.apply_pauli(1 + static_cast<int>(rng() % 3), s.g->qubits[0]);
                    } else {
                        const int idx = 1 + static_cast<int>(rng() % 15);
                        if (idx >> 2) psi.apply_pauli(idx >> 2, s.g->qubits[0]);
                        if (idx & 3) psi.apply_pauli(idx & 3, s.g->qubits[1]);
                    }
                }
            }
            const double u = uniform01();
            double acc = 0.0;
            std::size_t outcome = D - 1;
            for (std::size_t i = 0; i < D; ++i) {
                acc += std::norm(psi.amplitudes()[i]);
                if (u < acc) {
                    outcome = i;
                    break;
                }
            }
            ++counts[outcome];
        }
    };

    unsigned thread_count = std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min({thread_count, 16u, static_cast<unsigned>((shots + 4095) / 4096)});

    std::vector<std::vector<std::uint64_t>> counts(thread_count, std::vector<std::uint64_t>(D, 0));
    if (thread_count == 1) {
        run_block(0, shots, counts[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (shots + thread_count - 1) / thread_count;
        for (unsigned t = 0; t < thread_count; ++t) {
            const std::uint64_t first = t * chunk;
            const std::uint64_t last = std::min(shots, first + chunk);
            if (first >= last) break;
            pool.emplace_back([&, first, last, t] { run_block(first, last, counts[t]); });
        }
        for (auto& th : pool) th.join();
    }

    OutcomeDistribution dist;
    dist.n = c.n;
    dist.probabilities.assign(D, 0.0);
    for (const auto& block : counts)
        for (std::size_t i = 0; i < D; ++i) dist.probabilities[i] += static_cast<double>(block[i]);
    for (double& p : dist.probabilities) p /= static_cast<double>(shots);
    return dist;
}

} // namespace ampopt::sim
