#include "ampopt/qasm.hpp"
#include "ampopt/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ampopt;

namespace {

Circuit build(int n, const std::set<std::string>& marked,
              std::optional<int> override = std::nullopt) {
    synth::GroverSpec spec;
    spec.n = n;
    spec.marked = MarkedSet{n, marked};
    spec.iterations_override = override;
    return synth::build_amplification_circuit(spec);
}

} // namespace

TEST_CASE("parse reads pragmas into meta and segments") {
    const std::string text =
        "OPENQASM 2.0;\n"
        "qreg q[5];\n"
        "h q[0];\n"
        "// @ampopt amplification_begin theta=0.177713\n"
        "// @ampopt iteration_begin\n"
        "x q[1];\n"
        "cx q[0],q[1];\n"
        "// @ampopt iteration_end\n"
        "// @ampopt iteration_begin\n"
        "rz(pi/4) q[2];\n"
        "// @ampopt iteration_end\n"
        "// @ampopt amplification_end\n";
    const Circuit c = qasm::parse(text);
    CHECK(c.n == 5);
    CHECK(c.meta.has_value());
    CHECK(c.meta->theta == doctest::Approx(0.177713).epsilon(1e-12));
    CHECK(c.meta->m == 1);
    CHECK(c.meta->t_opt == 4);
    CHECK(c.segments.size() == 2);
    CHECK(c.preamble_end() == 1);
    CHECK(c.gates[3].kind == GateKind::RZ);
    CHECK(c.gates[3].angle == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("iteration_end before iteration_begin is unbalanced") {
    const std::string text =
        "OPENQASM 2.0;\n"
        "qreg q[2];\n"
        "// @ampopt amplification_begin theta=0.5\n"
        "// @ampopt iteration_end\n";
    CHECK_THROWS_WITH_AS(qasm::parse(text),
                         doctest::Contains("unbalanced intrinsic"), qasm::ParseError);
}

TEST_CASE("parse errors carry 1-based line numbers") {
    const std::string text =
        "OPENQASM 2.0;\n"
        "qreg q[2];\n"
        "cz q[0],q[1];\n";
    try {
        qasm::parse(text);
        FAIL("expected a parse error");
    } catch (const qasm::ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("unknown gate") != std::string::npos);
    }
}

TEST_CASE("parser rejects malformed documents") {
    CHECK_THROWS_AS(qasm::parse("qreg q[2];\n"), qasm::ParseError);           // no header
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\n"), qasm::ParseError);        // no qreg
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\nqreg q[2];\nqreg r[2];\n"),   // two registers
                    qasm::ParseError);
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\nqreg q[2];\nsx q[2];\n"),     // index out of range
                    qasm::ParseError);
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\nqreg q[2];\nsx r[0];\n"),     // unknown register
                    qasm::ParseError);
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\nqreg q[2];\n// @ampopt frobnicate\n"),
                    qasm::ParseError);
    CHECK_THROWS_AS(qasm::parse("OPENQASM 2.0;\nqreg q[2];\nsx q[0]\n"),      // missing semicolon
                    qasm::ParseError);
}

TEST_CASE("gates outside iteration blocks are rejected") {
    const std::string inside =
        "OPENQASM 2.0;\n"
        "qreg q[2];\n"
        "// @ampopt amplification_begin theta=0.5\n"
        "sx q[0];\n";
    CHECK_THROWS_WITH_AS(qasm::parse(inside), doctest::Contains("outside an iteration"),
                         qasm::ParseError);
    const std::string after =
        "OPENQASM 2.0;\n"
        "qreg q[2];\n"
        "// @ampopt amplification_begin theta=0.5\n"
        "// @ampopt amplification_end\n"
        "sx q[0];\n";
    CHECK_THROWS_WITH_AS(qasm::parse(after), doctest::Contains("after amplification block"),
                         qasm::ParseError);
}

TEST_CASE("ordinary comments and blank lines are ignored") {
    const std::string text =
        "OPENQASM 2.0;\n"
        "// a file comment\n"
        "\n"
        "qreg q[2];\n"
        "sx q[0]; // trailing note\n";
    const Circuit c = qasm::parse(text);
    CHECK(c.gates.size() == 1);
    CHECK(!c.meta.has_value());
}

TEST_CASE("extra whitespace inside statements is tolerated") {
    const std::string text =
        "OPENQASM 2.0;\n"
        "qreg  q[ 3 ] ;\n"
        "rz( pi/4 )  q[ 0 ] ;\n"
        "cx q[ 0 ] , q[ 2 ];\n";
    const Circuit c = qasm::parse(text);
    REQUIRE(c.gates.size() == 2);
    CHECK(c.gates[0].angle == doctest::Approx(std::numbers::pi / 4));
    CHECK(c.gates[1].qubits == std::vector<int>{0, 2});
}

TEST_CASE("pi-multiple angles parse") {
    auto angle_of = [](const std::string& expr) {
        const Circuit c = qasm::parse("OPENQASM 2.0;\nqreg q[1];\nrz(" + expr + ") q[0];\n");
        return c.gates[0].angle;
    };
    CHECK(angle_of("pi") == doctest::Approx(std::numbers::pi));
    CHECK(angle_of("pi/4") == doctest::Approx(std::numbers::pi / 4));
    CHECK(angle_of("-pi/2") == doctest::Approx(-std::numbers::pi / 2));
    CHECK(angle_of("3*pi/4") == doctest::Approx(3 * std::numbers::pi / 4));
    CHECK(angle_of("0.125") == 0.125);
    CHECK_THROWS_AS(angle_of("pi/0"), qasm::ParseError);
    CHECK_THROWS_AS(angle_of("2/3"), qasm::ParseError);
}

TEST_CASE("round trip: parse after emit is the identity") {
    const Circuit c = build(5, {"11010"});
    const Circuit back = qasm::parse(qasm::emit(c));
    CHECK(back == c);
}

TEST_CASE("emit is idempotent through a parse cycle") {
    const Circuit c = build(3, {"101", "010"});
    const std::string once = qasm::emit(c);
    CHECK(qasm::emit(qasm::parse(once)) == once);
}

TEST_CASE("round trip preserves truncated and overridden circuits") {
    const Circuit more = build(4, {"1100"}, 6);
    CHECK(qasm::parse(qasm::emit(more)) == more);
    const Circuit none = truncate_after(build(4, {"1100"}), 0);
    const Circuit back = qasm::parse(qasm::emit(none));
    CHECK(back == none);
    CHECK(back.meta.has_value());
    CHECK(back.segments.empty());
}

TEST_CASE("circuit without meta emits plain qasm") {
    Circuit c;
    c.n = 2;
    c.gates = {make_sx(0), make_cx(0, 1)};
    const std::string text = qasm::emit(c);
    CHECK(text.find("@ampopt") == std::string::npos);
    CHECK(qasm::parse(text) == c);
}

TEST_CASE("preamble-only instrumented circuit emits an empty amplification block") {
    const Circuit c = truncate_after(build(2, {"11"}), 0);
    const std::string text = qasm::emit(c);
    CHECK(text.find("amplification_begin") != std::string::npos);
    CHECK(text.find("iteration_begin") == std::string::npos);
    CHECK(text == "OPENQASM 2.0;\n"
                  "qreg q[2];\n"
                  "rz(1.5707963267948966) q[0];\n"
                  "sx q[0];\n"
                  "rz(1.5707963267948966) q[0];\n"
                  "rz(1.5707963267948966) q[1];\n"
                  "sx q[1];\n"
                  "rz(1.5707963267948966) q[1];\n"
                  "// @ampopt amplification_begin theta=0.52359877559829893\n"
                  "// @ampopt amplification_end\n");
}

TEST_CASE("emit rejects invalid circuits and unlowered mcphase") {
    Circuit bad;
    bad.n = 2;
    bad.gates.push_back(GateOp{GateKind::CX, {0, 0}, 0.0});
    CHECK_THROWS_AS(qasm::emit(bad), std::invalid_argument);

    Circuit mc;
    mc.n = 2;
    mc.gates.push_back(make_mcphase({0, 1}, 1.0));
    CHECK_THROWS_AS(qasm::emit(mc), std::invalid_argument);
}

TEST_CASE("emitted angles reparse to identical doubles") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    Circuit c;
    c.n = 1;
    for (int i = 0; i < 200; ++i) c.gates.push_back(make_rz(0, dist(rng)));
    c.gates.push_back(make_rz(0, 1e-300));
    c.gates.push_back(make_rz(0, -3.0e300));
    const Circuit back = qasm::parse(qasm::emit(c));
    REQUIRE(back.gates.size() == c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) CHECK(back.gates[i].angle == c.gates[i].angle);
}
