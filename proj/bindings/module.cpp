#include "ampopt/noise.hpp"
#include "ampopt/predict.hpp"
#include "ampopt/qasm.hpp"
#include "ampopt/sim.hpp"
#include "ampopt/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace ampopt;

namespace {

MarkedSet marked_from_list(int n, const std::vector<std::string>& states) {
    MarkedSet marked;
    marked.n = n;
    for (const auto& s : states) marked.states.insert(state_bits(state_index(s, n), n));
    if (marked.states.empty()) throw std::invalid_argument("no marked states given");
    return marked;
}

predict::Criterion criterion_from_name(const std::string& name) {
    if (name == "peak") return predict::Criterion::Peak;
    if (name == "paper-literal") return predict::Criterion::Literal;
    throw std::invalid_argument("criterion must be 'peak' or 'paper-literal'");
}

int infer_n(std::size_t dim) {
    int n = 0;
    while ((std::size_t(1) << n) < dim) ++n;
    if ((std::size_t(1) << n) != dim)
        throw std::invalid_argument("probability vector length is not a power of two");
    return n;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "noise-aware transpiler toolkit for amplitude amplification circuits";

    py::class_<Circuit>(m, "Circuit")
        .def_readonly("n", &Circuit::n)
        .def_property_readonly("num_gates",
                               [](const Circuit& c) { return c.gates.size(); })
        .def_property_readonly("num_iterations",
                               [](const Circuit& c) { return c.segments.size(); })
        .def_property_readonly("theta",
                               [](const Circuit& c) -> py::object {
                                   if (!c.meta) return py::none();
                                   return py::float_(c.meta->theta);
                               })
        .def_property_readonly("t_opt",
                               [](const Circuit& c) -> py::object {
                                   if (!c.meta) return py::none();
                                   return py::int_(c.meta->t_opt);
                               })
        .def("validate", &validate)
        .def("truncate_after", &truncate_after, py::arg("t"))
        .def("iteration_segment", &iteration_segment, py::arg("t"))
        .def("__eq__", [](const Circuit& a, const Circuit& b) { return a == b; })
        .def("__repr__", [](const Circuit& c) {
            return "<Circuit n=" + std::to_string(c.n) + " gates=" +
                   std::to_string(c.gates.size()) + " iterations=" +
                   std::to_string(c.segments.size()) + ">";
        });

    py::class_<noise::NoiseProfile>(m, "NoiseProfile")
        .def_readonly("name", &noise::NoiseProfile::name)
        .def("__repr__", [](const noise::NoiseProfile& p) {
            return "<NoiseProfile '" + p.name + "'>";
        });

    py::class_<predict::PredictionPoint>(m, "PredictionPoint")
        .def_readonly("t", &predict::PredictionPoint::t)
        .def_readonly("amplification", &predict::PredictionPoint::amplification)
        .def_readonly("cumulative_noise", &predict::PredictionPoint::cumulative_noise)
        .def_readonly("estimated_success", &predict::PredictionPoint::estimated_success);

    py::class_<predict::PredictionCurve>(m, "PredictionCurve")
        .def_readonly("theta", &predict::PredictionCurve::theta)
        .def_readonly("baseline_success", &predict::PredictionCurve::baseline_success)
        .def_readonly("points", &predict::PredictionCurve::points)
        .def_readonly("inflection", &predict::PredictionCurve::inflection);

    m.def(
        "grover_params",
        [](int m_count, int n) {
            const auto p = synth::grover_params(m_count, n);
            return py::make_tuple(p.theta, p.t_opt);
        },
        py::arg("m"), py::arg("n"),
        "initial amplitude angle and noiseless optimal iteration count");

    m.def(
        "build_circuit",
        [](int n, const std::vector<std::string>& marked, std::optional<int> iterations) {
            synth::GroverSpec spec;
            spec.n = n;
            spec.marked = marked_from_list(n, marked);
            spec.iterations_override = iterations;
            return synth::build_amplification_circuit(spec);
        },
        py::arg("n"), py::arg("marked"), py::arg("iterations") = std::nullopt,
        "instrumented amplification circuit over {rz, sx, cx}");

    m.def("parse", &qasm::parse, py::arg("text"));
    m.def("emit", &qasm::emit, py::arg("circuit"));
    m.def("load_circuit", &qasm::load_file, py::arg("path"));
    m.def("save_circuit", &qasm::save_file, py::arg("circuit"), py::arg("path"));

    m.def("load_profile", &noise::load_profile, py::arg("path"));
    m.def("profile_from_json", &noise::parse_profile, py::arg("text"));
    m.def(
        "uniform_profile",
        [](double sx, double cx, double rz) {
            noise::NoiseProfile p;
            p.name = "uniform";
            p.lambda_by_kind = {{GateKind::RZ, rz}, {GateKind::SX, sx}, {GateKind::CX, cx}};
            return p;
        },
        py::arg("sx"), py::arg("cx"), py::arg("rz") = 0.0);

    m.def("lambda_to_p", &noise::lambda_to_p, py::arg("lam"), py::arg("arity"));
    m.def(
        "calculate_noise",
        [](const Circuit& segment, const noise::NoiseProfile& profile) {
            return noise::calculate_noise(segment, profile).noise_rate;
        },
        py::arg("segment"), py::arg("profile"));

    m.def("amplification_at", &predict::amplification_at, py::arg("theta"), py::arg("t"));
    m.def(
        "predict_curve",
        [](const Circuit& c, const noise::NoiseProfile& profile, bool include_preamble_noise) {
            predict::PredictOptions options;
            options.include_preamble_noise = include_preamble_noise;
            return predict::predict_curve(c, profile, options);
        },
        py::arg("circuit"), py::arg("profile"), py::arg("include_preamble_noise") = false);
    m.def(
        "find_inflection",
        [](const predict::PredictionCurve& curve, const std::string& criterion) {
            return predict::find_inflection(curve, criterion_from_name(criterion));
        },
        py::arg("curve"), py::arg("criterion") = "peak");
    m.def(
        "optimize_circuit",
        [](const Circuit& c, const noise::NoiseProfile& profile, const std::string& criterion,
           bool include_preamble_noise) {
            predict::PredictOptions options;
            options.include_preamble_noise = include_preamble_noise;
            auto result =
                predict::optimize_circuit(c, profile, criterion_from_name(criterion), options);
            return py::make_tuple(std::move(result.circuit), std::move(result.curve));
        },
        py::arg("circuit"), py::arg("profile"), py::arg("criterion") = "peak",
        py::arg("include_preamble_noise") = false,
        "truncated circuit plus the curve that justified the cut");

    m.def(
        "simulate",
        [](const Circuit& c, const noise::NoiseProfile& profile, int upto) {
            return sim::simulate(c, profile, upto).probabilities;
        },
        py::arg("circuit"), py::arg("profile"), py::arg("upto"),
        "exact noisy outcome distribution after the given iteration count");
    m.def(
        "sweep",
        [](const Circuit& c, const noise::NoiseProfile& profile,
           const std::vector<std::string>& marked) {
            std::vector<std::pair<int, double>> out;
            for (const auto& pt : sim::sweep(c, profile, marked_from_list(c.n, marked)))
                out.emplace_back(pt.t, pt.observed_success);
            return out;
        },
        py::arg("circuit"), py::arg("profile"), py::arg("marked"),
        "(t, observed success) for t = 0..iterations");
    m.def(
        "trajectory_sample",
        [](const Circuit& c, const noise::NoiseProfile& profile, std::uint64_t shots,
           std::uint64_t seed) {
            return sim::trajectory_sample(c, profile, shots, seed).probabilities;
        },
        py::arg("circuit"), py::arg("profile"), py::arg("shots"), py::arg("seed") = 12345,
        "empirical outcome distribution from Pauli-trajectory sampling");
    m.def(
        "success_probability",
        [](const std::vector<double>& probabilities, const std::vector<std::string>& marked) {
            sim::OutcomeDistribution dist;
            dist.n = infer_n(probabilities.size());
            dist.probabilities = probabilities;
            return sim::success_probability(dist, marked_from_list(dist.n, marked));
        },
        py::arg("probabilities"), py::arg("marked"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
