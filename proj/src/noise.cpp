#include "ampopt/noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ampopt::noise {

namespace {

int gate_arity(const GateOp& g) { return static_cast<int>(g.qubits.size()); }

GateKind kind_from_name(const std::string& name) {
    if (name == "rz") return GateKind::RZ;
    if (name == "sx") return GateKind::SX;
    if (name == "cx") return GateKind::CX;
    throw std::invalid_argument("unknown gate kind '" + name + "' in noise profile");
}

int kind_arity(GateKind kind) { return kind == GateKind::CX ? 2 : 1; }

void check_bound(double lambda, int arity, const std::string& what) {
    if (!(lambda >= 0.0) || lambda > lambda_bound(arity))
        throw std::invalid_argument(what + ": lambda " + std::to_string(lambda) +
                                    " outside [0, 4^" + std::to_string(arity) + "/(4^" +
                                    std::to_string(arity) + "-1)]");
}

} // namespace

double lambda_bound(int arity) {
    if (arity == 1) return 4.0 / 3.0;
    if (arity == 2) return 16.0 / 15.0;
    throw std::invalid_argument("unsupported gate arity " + std::to_string(arity));
}

double lambda_to_p(double lambda, int arity) {
    check_bound(lambda, arity, "lambda_to_p");
    const double factor = arity == 1 ? 0.75 : 0.9375; // (4^a - 1) / 4^a
    return lambda * factor;
}

double NoiseProfile::lambda_for(const GateOp& g) const {
    if (auto it = per_position.find({g.kind, g.qubits}); it != per_position.end())
        return it->second;
    if (auto it = lambda_by_kind.find(g.kind); it != lambda_by_kind.end())
        return it->second;
    throw std::invalid_argument("noise profile '" + name + "' has no parameter for gate kind '" +
                                gate_name(g.kind) + "'");
}

SegmentNoise calculate_noise(const Circuit& segment, const NoiseProfile& profile) {
    std::vector<double> ps;
    ps.reserve(segment.gates.size());
    bool tiny_survival = false;
    for (const GateOp& g : segment.gates) {
        const double p = lambda_to_p(profile.lambda_for(g), gate_arity(g));
        if (1.0 - p < 1e-8) tiny_survival = true;
        ps.push_back(p);
    }

    double survival;
    if (tiny_survival) {
        double log_survival = 0.0;
        for (double p : ps) log_survival += std::log1p(-p);
        survival = std::exp(log_survival);
    } else {
        survival = 1.0;
        for (double p : ps) survival *= 1.0 - p;
    }
    const double rate = std::min(1.0, std::max(0.0, 1.0 - survival));
    return SegmentNoise{rate};
}

Circuit synthetic_segment(const std::map<GateKind, std::size_t>& counts) {
    Circuit frag;
    frag.n = 2;
    for (const auto& [kind, count] : counts) {
        for (std::size_t i = 0; i < count; ++i) {
            switch (kind) {
                case GateKind::RZ: frag.gates.push_back(make_rz(0, 0.0)); break;
                case GateKind::SX: frag.gates.push_back(make_sx(0)); break;
                case GateKind::CX: frag.gates.push_back(make_cx(0, 1)); break;
                default:
                    throw std::invalid_argument(std::string("synthetic segments support basis kinds only, got '") +
                                                gate_name(kind) + "'");
            }
        }
    }
    return frag;
}

NoiseProfile parse_profile(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("noise profile is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("noise profile must be a JSON object");

    NoiseProfile profile;
    if (!doc.contains("name") || !doc["name"].is_string())
        throw std::invalid_argument("noise profile needs a string 'name'");
    profile.name = doc["name"].get<std::string>();

    if (!doc.contains("lambda") || !doc["lambda"].is_object())
        throw std::invalid_argument("noise profile needs a 'lambda' object");
    const auto& lambda = doc["lambda"];
    for (const char* key : {"rz", "sx", "cx"})
        if (!lambda.contains(key))
            throw std::invalid_argument(std::string("noise profile lambda is missing gate kind '") + key + "'");
    for (const auto& [key, value] : lambda.items()) {
        const GateKind kind = kind_from_name(key);
        if (!value.is_number())
            throw std::invalid_argument("lambda for '" + key + "' must be a number");
        const double lam = value.get<double>();
        check_bound(lam, kind_arity(kind), "lambda for '" + key + "'");
        profile.lambda_by_kind[kind] = lam;
    }

    if (doc.contains("overrides")) {
        if (!doc["overrides"].is_array())
            throw std::invalid_argument("'overrides' must be an array");
        for (const auto& entry : doc["overrides"]) {
            if (!entry.is_object() || !entry.contains("kind") || !entry.contains("qubits") ||
                !entry.contains("lambda"))
                throw std::invalid_argument("each override needs 'kind', 'qubits' and 'lambda'");
            const GateKind kind = kind_from_name(entry["kind"].get<std::string>());
            std::vector<int> qubits = entry["qubits"].get<std::vector<int>>();
            if (static_cast<int>(qubits.size()) != kind_arity(kind))
                throw std::invalid_argument("override qubit tuple does not match arity of '" +
                                            entry["kind"].get<std::string>() + "'");
            const double lam = entry["lambda"].get<double>();
            check_bound(lam, kind_arity(kind), "override lambda");
            profile.per_position[{kind, std::move(qubits)}] = lam;
        }
    }

    for (const auto& [key, _] : doc.items())
        if (key != "name" && key != "lambda" && key != "overrides")
            throw std::invalid_argument("unknown key '" + key + "' in noise profile");
    return profile;
}

NoiseProfile load_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

} // namespace ampopt::noise
