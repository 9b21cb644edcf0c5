#include "ampopt/sim.hpp"
#include "ampopt/predict.hpp"

#include "ampopt/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/test_support.hpp"

using namespace ampopt;
using test_support::Matrix;
using test_support::cdouble;
using test_support::uniform_profile;

namespace {

using test_support::to_matrix;
using test_support::from_matrix;
using test_support::random_density;
using test_support::max_abs_diff;
using test_support::pauli_channel;

} // namespace

TEST_CASE("apply_gate moves basis states as expected") {
    sim::DensityMatrix rho(1);
    sim::apply_gate(rho, make_x(0));
    CHECK(rho.at(1, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(rho.at(0, 0)) < 1e-15);

    sim::DensityMatrix id(2);
    const Matrix before = to_matrix(id);
    sim::apply_gate(id, make_rz(1, 0.0));
    CHECK(max_abs_diff(before, to_matrix(id)) == 0.0);

    CHECK_THROWS_AS(sim::apply_gate(id, make_sx(5)), std::invalid_argument);
    CHECK_THROWS_AS(sim::apply_gate(id, GateOp{GateKind::CX, {1, 1}, 0}), std::invalid_argument);
}

TEST_CASE("density evolution of a pure circuit matches the statevector outer product") {
    std::mt19937_64 rng(31);
    for (int n : {2, 4, 5}) {
        MarkedSet marked{n, {state_bits(rng() % (std::size_t(1) << n), n)}};
        synth::GroverSpec spec;
        spec.n = n;
        spec.marked = marked;
        const Circuit c = synth::build_amplification_circuit(spec);

        sim::DensityMatrix rho(n);
        sim::StateVector psi(n);
        for (const auto& g : c.gates) {
            sim::apply_gate(rho, g);
            psi.apply(g);
        }
        double err = 0.0;
        for (std::size_t r = 0; r < rho.dim(); ++r)
            for (std::size_t cidx = 0; cidx < rho.dim(); ++cidx)
                err = std::max(err, std::abs(rho.at(r, cidx) - psi.amplitudes()[r] *
                                                                  std::conj(psi.amplitudes()[cidx])));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("depolarizing channel: identity at lambda 0, mixed marginal at lambda 1") {
    std::mt19937_64 rng(17);
    const Matrix rho0 = random_density(2, rng);
    sim::DensityMatrix rho = from_matrix(2, rho0);
    const std::vector<int> q{1};
    sim::apply_depolarizing(rho, q, 0.0);
    CHECK(max_abs_diff(to_matrix(rho), rho0) == 0.0);

    // product state alpha|0> + beta|1> on qubit 0, |0> on qubit 1
    sim::DensityMatrix prod(2);
    sim::apply_gate(prod, make_sx(0));
    const std::vector<int> q0{0};
    sim::apply_depolarizing(prod, q0, 1.0);
    // qubit 0 marginal is I/2, qubit 1 stays |0>
    CHECK(prod.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prod.at(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(prod.at(0, 1)) < 1e-12);
    CHECK(std::abs(prod.at(2, 2)) < 1e-12);
}

TEST_CASE("maximally mixed state is a fixed point of the channel") {
    for (int n : {1, 2, 3}) {
        sim::DensityMatrix rho = sim::DensityMatrix::maximally_mixed(n);
        const Matrix before = to_matrix(rho);
        for (int q = 0; q < n; ++q) {
            const std::vector<int> qs{q};
            sim::apply_depolarizing(rho, qs, 0.7);
        }
        if (n >= 2) {
            const std::vector<int> pair{0, n - 1};
            sim::apply_depolarizing(rho, pair, 0.9);
        }
        CHECK(max_abs_diff(before, to_matrix(rho)) < 1e-14);
    }
}

TEST_CASE("single-qubit ensemble decomposition on an sx output") {
    const double lambda = 0.23;
    sim::DensityMatrix rho(1);
    sim::apply_gate(rho, make_sx(0));
    const Matrix original = to_matrix(rho);
    const std::vector<int> q{0};
    sim::apply_depolarizing(rho, q, lambda);

    Matrix want(2, 2);
    want.at(0, 0) = (1 - lambda) * original.at(0, 0) + lambda / 2;
    want.at(1, 1) = (1 - lambda) * original.at(1, 1) + lambda / 2;
    want.at(0, 1) = (1 - lambda) * original.at(0, 1);
    want.at(1, 0) = (1 - lambda) * original.at(1, 0);
    CHECK(max_abs_diff(to_matrix(rho), want) < 1e-12);
}

TEST_CASE("two-qubit ensemble decomposition with weights (1-lambda, lambda/4 x4)") {
    const double lambda = 0.1;
    sim::DensityMatrix rho(2);
    sim::apply_gate(rho, make_h(0));
    sim::apply_gate(rho, make_cx(0, 1));
    const Matrix original = to_matrix(rho);
    const std::vector<int> qs{0, 1};
    sim::apply_depolarizing(rho, qs, lambda);

    Matrix want(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            want.at(r, c) = (1 - lambda) * original.at(r, c) + (r == c ? lambda / 4 : 0.0);
    CHECK(max_abs_diff(to_matrix(rho), want) < 1e-12);
}

TEST_CASE("pauli twirl averages any state to the maximally mixed state") {
    std::mt19937_64 rng(41);
    const Matrix rho = random_density(1, rng);
    Matrix avg(2, 2);
    for (int j = 0; j < 4; ++j) {
        const Matrix p = test_support::pauli(j);
        const Matrix term = test_support::multiply(test_support::multiply(p, rho), test_support::dagger(p));
        for (std::size_t i = 0; i < avg.a.size(); ++i) avg.a[i] += 0.25 * term.a[i];
    }
    Matrix mixed(2, 2);
    mixed.at(0, 0) = 0.5;
    mixed.at(1, 1) = 0.5;
    CHECK(max_abs_diff(avg, mixed) < 1e-12);
}

TEST_CASE("convex form equals the Pauli form with P = (4^k-1)/4^k lambda") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        // one qubit, whole system
        {
            const double lambda = 0.05 + 0.1 * trial;
            const Matrix rho0 = random_density(1, rng);
            sim::DensityMatrix rho = from_matrix(1, rho0);
            const std::vector<int> q{0};
            sim::apply_depolarizing(rho, q, lambda);
            const Matrix want = pauli_channel(rho0, {0}, 1, noise::lambda_to_p(lambda, 1));
            CHECK(max_abs_diff(to_matrix(rho), want) < 1e-12);
        }
        // two qubits, whole system
        {
            const double lambda = 0.03 + 0.07 * trial;
            const Matrix rho0 = random_density(2, rng);
            sim::DensityMatrix rho = from_matrix(2, rho0);
            const std::vector<int> qs{0, 1};
            sim::apply_depolarizing(rho, qs, lambda);
            const Matrix want = pauli_channel(rho0, {0, 1}, 2, noise::lambda_to_p(lambda, 2));
            CHECK(max_abs_diff(to_matrix(rho), want) < 1e-12);
        }
        // two-qubit channel embedded in a three-qubit system
        {
            const double lambda = 0.11;
            const Matrix rho0 = random_density(3, rng);
            sim::DensityMatrix rho = from_matrix(3, rho0);
            const std::vector<int> qs{0, 2};
            sim::apply_depolarizing(rho, qs, lambda);
            const Matrix want = pauli_channel(rho0, {0, 2}, 3, noise::lambda_to_p(lambda, 2));
            CHECK(max_abs_diff(to_matrix(rho), want) < 1e-12);
        }
    }
}

TEST_CASE("simulate: preamble only is exactly uniform") {
    synth::GroverSpec spec;
    spec.n = 4;
    spec.marked = MarkedSet{4, {"1010"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto dist = sim::simulate(c, uniform_profile(0, 0, 0), 0);
    for (double p : dist.probabilities) CHECK(p == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("simulate: noiseless 5-qubit search peaks above 0.999") {
    synth::GroverSpec spec;
    spec.n = 5;
    spec.marked = MarkedSet{5, {"11010"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto dist = sim::simulate(c, uniform_profile(0, 0, 0), 4);
    CHECK(sim::success_probability(dist, spec.marked) >= 0.999);
}

TEST_CASE("simulate: boundary lambda drives the register to uniform noise") {
    synth::GroverSpec spec;
    spec.n = 3;
    spec.marked = MarkedSet{3, {"111"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto dist =
        sim::simulate(c, uniform_profile(4.0 / 3.0, 4.0 / 3.0, 16.0 / 15.0), 1);
    for (double p : dist.probabilities) CHECK(p == doctest::Approx(1.0 / 8.0).epsilon(1e-6));
}

TEST_CASE("simulate rejects bad arguments") {
    synth::GroverSpec spec;
    spec.n = 2;
    spec.marked = MarkedSet{2, {"10"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    CHECK_THROWS_AS(sim::simulate(c, uniform_profile(0, 0, 0), 5), std::out_of_range);
    Circuit withH;
    withH.n = 2;
    withH.gates.push_back(make_h(0));
    CHECK_THROWS_AS(sim::simulate(withH, uniform_profile(0, 0, 0), 0), std::invalid_argument);
}

TEST_CASE("success_probability sums marked outcomes") {
    sim::OutcomeDistribution uniform{5, std::vector<double>(32, 1.0 / 32.0)};
    CHECK(sim::success_probability(uniform, MarkedSet{5, {"00000"}}) ==
          doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(sim::success_probability(uniform, MarkedSet{5, {"00001", "10000", "11111"}}) ==
          doctest::Approx(3.0 / 32.0).epsilon(1e-15));
    sim::OutcomeDistribution point{2, {0, 0, 0, 1.0}};
    CHECK(sim::success_probability(point, MarkedSet{2, {"11"}}) == 1.0);
    CHECK_THROWS_AS(sim::success_probability(point, MarkedSet{3, {"111"}}), std::invalid_argument);
}

TEST_CASE("sweep: zero noise reproduces the amplification curve") {
    synth::GroverSpec spec;
    spec.n = 5;
    spec.marked = MarkedSet{5, {"01101"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto points = sim::sweep(c, uniform_profile(0, 0, 0), spec.marked);
    REQUIRE(points.size() == 5);
    for (const auto& pt : points) {
        const double want = std::pow(std::sin((2 * pt.t + 1) * c.meta->theta), 2);
        CHECK(pt.observed_success == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("sweep under noise: single peak and conservative estimate") {
    synth::GroverSpec spec;
    spec.n = 5;
    spec.marked = MarkedSet{5, {"11010"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto profile = uniform_profile(0, 0.004, 0.004);

    sim::SimStats stats;
    const auto observed = sim::sweep(c, profile, spec.marked, &stats);
    const auto curve = predict::predict_curve(c, profile);

    std::size_t peak = 0;
    for (std::size_t i = 1; i < observed.size(); ++i)
        if (observed[i].observed_success > observed[peak].observed_success) peak = i;
    for (std::size_t i = 0; i < peak; ++i)
        CHECK(observed[i].observed_success < observed[i + 1].observed_success);
    for (std::size_t i = peak; i + 1 < observed.size(); ++i)
        CHECK(observed[i].observed_success > observed[i + 1].observed_success);

    CHECK(observed[0].observed_success >= curve.baseline_success - 0.01);
    for (const auto& pt : curve.points)
        CHECK(observed[static_cast<std::size_t>(pt.t)].observed_success >=
              pt.estimated_success - 0.01);
    CHECK(stats.renormalizations == 0);
}

TEST_CASE("trace stays within 1e-10 through a noisy run") {
    synth::GroverSpec spec;
    spec.n = 5;
    spec.marked = MarkedSet{5, {"00111"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto dist = sim::simulate(c, uniform_profile(0, 0.01, 0.01), 4);
    double total = 0.0;
    for (double p : dist.probabilities) total += p;
    CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("trajectory sampling is deterministic per seed") {
    synth::GroverSpec spec;
    spec.n = 3;
    spec.marked = MarkedSet{3, {"101"}};
    const Circuit c = synth::build_amplification_circuit(spec);
    const auto profile = uniform_profile(0, 0.01, 0.01);
    const auto a = sim::trajectory_sample(c, profile, 5000, 99);
    const auto b = sim::trajectory_sample(c, profile, 5000, 99);
    CHECK(a.probabilities == b.probabilities);
    const auto other = sim::trajectory_sample(c, profile, 5000, 100);
    CHECK(a.probabilities != other.probabilities);
}

TEST_CASE("trajectory sampling matches exact diagonals within 3 sigma") {
    synth::GroverSpec spec;
    spec.n = 4;
    spec.marked = MarkedSet{4, {"1011"}};
    spec.iterations_override = 2;
    const Circuit c = synth::build_amplification_circuit(spec);

    for (double lambda : {0.0, 0.006}) {
        const auto profile = uniform_profile(0, lambda, lambda);
        const std::uint64_t shots = 40000;
        const auto exact = sim::simulate(c, profile, 2);
        const auto sampled = sim::trajectory_sample(c, profile, shots, 7);
        for (std::size_t i = 0; i < exact.probabilities.size(); ++i) {
            const double p = exact.probabilities[i];
            const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
            CHECK(std::abs(sampled.probabilities[i] - p) <= 3.0 * sigma + 1e-12);
        }
    }
}
