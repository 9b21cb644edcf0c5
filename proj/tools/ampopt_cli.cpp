// Command-line front end: synthesize instrumented amplification circuits,
// predict per-iteration accuracy under a noise profile, truncate circuits at
// the predicted inflection point, and validate against the exact simulator.

#include "ampopt/noise.hpp"
#include "ampopt/predict.hpp"
#include "ampopt/qasm.hpp"
#include "ampopt/sim.hpp"
#include "ampopt/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace ampopt;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

MarkedSet parse_marked(const std::string& arg, int n) {
    MarkedSet marked;
    marked.n = n;
    std::size_t start = 0;
    while (start <= arg.size()) {
        std::size_t end = arg.find(',', start);
        if (end == std::string::npos) end = arg.size();
        std::string token = arg.substr(start, end - start);
        if (token.empty()) throw std::invalid_argument("empty marked-state entry");
        if (token.rfind("0x", 0) == 0 || token.rfind("0X", 0) == 0) {
            const unsigned long long value = std::stoull(token.substr(2), nullptr, 16);
            if (value >> n)
                throw std::invalid_argument("marked state " + token + " does not fit in " +
                                            std::to_string(n) + " bits");
            marked.states.insert(state_bits(value, n));
        } else {
            marked.states.insert(state_bits(state_index(token, n), n));
        }
        if (end == arg.size()) break;
        start = end + 1;
    }
    if (marked.states.empty()) throw std::invalid_argument("no marked states given");
    return marked;
}

struct KindCounts {
    std::size_t rz = 0, sx = 0, cx = 0;
};

KindCounts count_kinds(const Circuit& c, std::size_t from, std::size_t to) {
    KindCounts k;
    for (std::size_t i = from; i < to; ++i) {
        switch (c.gates[i].kind) {
            case GateKind::RZ: ++k.rz; break;
            case GateKind::SX: ++k.sx; break;
            case GateKind::CX: ++k.cx; break;
            default: break;
        }
    }
    return k;
}

Circuit synthetic_from_counts(const std::string& spec_str, int n, int m,
                              std::optional<int> iterations) {
    std::size_t counts[3] = {0, 0, 0};
    std::size_t start = 0;
    int field = 0;
    for (; field < 3 && start <= spec_str.size(); ++field) {
        std::size_t end = spec_str.find(',', start);
        if (end == std::string::npos) end = spec_str.size();
        counts[field] = std::stoull(spec_str.substr(start, end - start));
        start = end + 1;
    }
    if (field != 3 || start <= spec_str.size())
        throw std::invalid_argument("--counts-from-table expects exactly 'rz,sx,cx'");

    const auto params = synth::grover_params(m, n);
    Circuit c;
    c.n = n;
    c.meta = AmplificationMeta{params.theta, params.t_opt, m, n};
    for (int q = 0; q < n; ++q) {
        c.gates.push_back(make_rz(q, 1.5707963267948966));
        c.gates.push_back(make_sx(q));
        c.gates.push_back(make_rz(q, 1.5707963267948966));
    }
    const Circuit segment = noise::synthetic_segment(
        {{GateKind::RZ, counts[0]}, {GateKind::SX, counts[1]}, {GateKind::CX, counts[2]}});
    const int total = iterations.value_or(params.t_opt);
    for (int t = 0; t < total; ++t) append_segment(c, segment);
    return c;
}

class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_curve_csv(std::ostream& out, const predict::PredictionCurve& curve,
                     const std::vector<sim::SweepPoint>* observed) {
    out << "t,amplification,cumulative_noise,estimated_success";
    if (observed) out << ",observed_success";
    out << "\n";
    const double base_amp = predict::amplification_at(curve.theta, 0);
    const double base_noise = 1.0 - curve.baseline_success / base_amp;
    out << "0," << fmt(base_amp) << "," << fmt(base_noise < 1e-15 ? 0.0 : base_noise) << ","
        << fmt(curve.baseline_success);
    if (observed) out << "," << fmt((*observed)[0].observed_success);
    out << "\n";
    for (const auto& pt : curve.points) {
        out << pt.t << "," << fmt(pt.amplification) << "," << fmt(pt.cumulative_noise) << ","
            << fmt(pt.estimated_success);
        if (observed) out << "," << fmt((*observed)[static_cast<std::size_t>(pt.t)].observed_success);
        out << "\n";
    }
}

struct CommonOptions {
    std::string circuit_path;
    std::string profile_path;
    std::string out_path;
    std::string criterion = "peak";
    bool include_preamble = false;
};

predict::Criterion criterion_of(const std::string& name) {
    if (name == "peak") return predict::Criterion::Peak;
    if (name == "paper-literal") return predict::Criterion::Literal;
    throw std::invalid_argument("criterion must be 'peak' or 'paper-literal'");
}

int cmd_synth(int n, const std::string& marked_arg, std::optional<int> iterations,
              const std::string& out_path) {
    synth::GroverSpec spec;
    spec.n = n;
    spec.marked = parse_marked(marked_arg, n);
    spec.iterations_override = iterations;
    const Circuit c = synth::build_amplification_circuit(spec);

    std::cout << "theta=" << fmt(c.meta->theta) << "\n";
    std::cout << "t_opt=" << c.meta->t_opt << "\n";
    std::cout << "iterations=" << c.segments.size() << "\n";
    const KindCounts pre = count_kinds(c, 0, c.preamble_end());
    std::cout << "preamble gates: rz=" << pre.rz << " sx=" << pre.sx << " cx=" << pre.cx << "\n";
    if (!c.segments.empty()) {
        const KindCounts per = count_kinds(c, c.segments[0].begin, c.segments[0].end);
        std::cout << "per-iteration gates: rz=" << per.rz << " sx=" << per.sx << " cx=" << per.cx
                  << "\n";
    }
    if (out_path.empty()) {
        std::cout << qasm::emit(c);
    } else {
        qasm::save_file(c, out_path);
        std::cout << "wrote: " << out_path << "\n";
    }
    return 0;
}

int cmd_predict(const CommonOptions& common, const std::string& counts, int n, int m,
                std::optional<int> iterations) {
    const Circuit c = counts.empty() ? qasm::load_file(common.circuit_path)
                                     : synthetic_from_counts(counts, n, m, iterations);
    const auto profile = noise::load_profile(common.profile_path);
    predict::PredictOptions options;
    options.include_preamble_noise = common.include_preamble;
    auto curve = predict::predict_curve(c, profile, options);
    const auto criterion = criterion_of(common.criterion);
    curve.inflection = predict::find_inflection(curve, criterion);
    if (criterion == predict::Criterion::Literal) {
        const int peak = predict::find_inflection(curve, predict::Criterion::Peak);
        if (peak != curve.inflection)
            std::cerr << "warning: paper-literal criterion selects t*=" << curve.inflection
                      << "; the peak criterion would select t*=" << peak << "\n";
    }

    CsvSink sink(common.out_path);
    write_curve_csv(sink.stream(), curve, nullptr);
    std::cout << "inflection=" << curve.inflection << "\n";
    return 0;
}

int cmd_optimize(const CommonOptions& common, const std::string& curve_path) {
    const Circuit c = qasm::load_file(common.circuit_path);
    const auto profile = noise::load_profile(common.profile_path);
    predict::PredictOptions options;
    options.include_preamble_noise = common.include_preamble;
    const auto result =
        predict::optimize_circuit(c, profile, criterion_of(common.criterion), options);

    if (common.out_path.empty()) {
        std::cout << qasm::emit(result.circuit);
    } else {
        qasm::save_file(result.circuit, common.out_path);
        std::cout << "wrote: " << common.out_path << "\n";
    }
    const std::string sidecar =
        !curve_path.empty() ? curve_path
                            : (!common.out_path.empty() ? common.out_path + ".csv" : std::string());
    if (!sidecar.empty()) {
        CsvSink sink(sidecar);
        write_curve_csv(sink.stream(), result.curve, nullptr);
    }
    std::cout << "inflection=" << result.curve.inflection << "\n";
    std::cout << "iterations_kept=" << result.circuit.segments.size() << "\n";
    return 0;
}

int cmd_simulate(const CommonOptions& common, const std::string& marked_arg,
                 std::optional<std::uint64_t> shots, std::uint64_t seed) {
    const Circuit c = qasm::load_file(common.circuit_path);
    const auto profile = noise::load_profile(common.profile_path);
    const MarkedSet marked = parse_marked(marked_arg, c.n);
    predict::PredictOptions options;
    options.include_preamble_noise = common.include_preamble;
    const auto curve = predict::predict_curve(c, profile, options);

    std::vector<sim::SweepPoint> observed;
    if (!shots) {
        observed = sim::sweep(c, profile, marked);
    } else {
        for (int t = 0; t <= static_cast<int>(c.segments.size()); ++t) {
            const auto dist =
                sim::trajectory_sample(truncate_after(c, t), profile, *shots,
                                       seed + static_cast<std::uint64_t>(t));
            observed.push_back({t, sim::success_probability(dist, marked)});
        }
    }

    CsvSink sink(common.out_path);
    write_curve_csv(sink.stream(), curve, &observed);

    std::size_t peak = 0;
    for (std::size_t i = 1; i < observed.size(); ++i)
        if (observed[i].observed_success > observed[peak].observed_success) peak = i;
    std::cout << "observed_peak=" << peak << "\n";
    std::cout << "predicted_inflection=" << curve.inflection << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"noise-aware transpiler toolkit for amplitude amplification"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "build an instrumented amplification circuit");
    int synth_n = 0;
    std::string synth_marked;
    std::optional<int> synth_iterations;
    std::string synth_out;
    synth_cmd->add_option("--n", synth_n, "qubit count")->required();
    synth_cmd->add_option("--marked", synth_marked, "comma-separated marked states (binary or 0x hex)")
        ->required();
    synth_cmd->add_option("--iterations", synth_iterations, "override the built iteration count");
    synth_cmd->add_option("--out", synth_out, "output .aaq path (stdout when omitted)");

    // shared options builder
    auto add_common = [](CLI::App* cmd, CommonOptions& opts, bool circuit_required) {
        auto* circuit = cmd->add_option("--circuit", opts.circuit_path, "input .aaq circuit");
        if (circuit_required) circuit->required();
        cmd->add_option("--profile", opts.profile_path, "noise profile JSON")->required();
        cmd->add_option("--out", opts.out_path, "output path (stdout when omitted)");
        cmd->add_option("--criterion", opts.criterion, "inflection criterion: peak | paper-literal")
            ->check(CLI::IsMember({"peak", "paper-literal"}));
        cmd->add_flag("--include-preamble-noise", opts.include_preamble,
                      "count preamble gates in the cumulative noise");
    };

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "per-iteration accuracy curve and inflection");
    CommonOptions predict_opts;
    std::string predict_counts;
    int predict_n = 0, predict_m = 1;
    std::optional<int> predict_iterations;
    add_common(predict_cmd, predict_opts, false);
    predict_cmd->add_option("--counts-from-table", predict_counts,
                            "build synthetic iterations from 'rz,sx,cx' gate counts");
    predict_cmd->add_option("--n", predict_n, "qubit count for --counts-from-table");
    predict_cmd->add_option("--m", predict_m, "marked-state count for --counts-from-table");
    predict_cmd->add_option("--iterations", predict_iterations,
                            "iteration count for --counts-from-table");

    // optimize
    auto* optimize_cmd = app.add_subcommand("optimize", "truncate a circuit at the inflection point");
    CommonOptions optimize_opts;
    std::string optimize_curve;
    add_common(optimize_cmd, optimize_opts, true);
    optimize_cmd->add_option("--curve", optimize_curve, "sidecar CSV path (default: <out>.csv)");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "observed vs estimated success per iteration");
    CommonOptions simulate_opts;
    std::string simulate_marked;
    std::optional<std::uint64_t> simulate_shots;
    std::uint64_t simulate_seed = 12345;
    add_common(simulate_cmd, simulate_opts, true);
    simulate_cmd->add_option("--marked", simulate_marked, "comma-separated marked states")->required();
    simulate_cmd->add_option("--shots", simulate_shots,
                             "sample Pauli trajectories instead of exact evolution");
    simulate_cmd->add_option("--seed", simulate_seed, "trajectory RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (synth_cmd->parsed())
            return cmd_synth(synth_n, synth_marked, synth_iterations, synth_out);
        if (predict_cmd->parsed()) {
            if (predict_counts.empty() && predict_opts.circuit_path.empty())
                throw std::invalid_argument("predict needs --circuit or --counts-from-table");
            if (!predict_counts.empty() && predict_n <= 0)
                throw std::invalid_argument("--counts-from-table needs --n");
            return cmd_predict(predict_opts, predict_counts, predict_n, predict_m,
                               predict_iterations);
        }
        if (optimize_cmd->parsed()) return cmd_optimize(optimize_opts, optimize_curve);
        if (simulate_cmd->parsed())
            return cmd_simulate(simulate_opts, simulate_marked, simulate_shots, simulate_seed);
    } catch (const qasm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
