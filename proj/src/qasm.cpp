#include "ampopt/qasm.hpp"

#include "ampopt/synth.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ampopt::qasm {

namespace {

constexpr const char* kPragmaPrefix = "// @ampopt";

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line;

    int column() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }

    void skip_spaces() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line, column());
    }

    bool eat(char ch) {
        if (peek() != ch) return false;
        ++pos;
        return true;
    }

    void expect(char ch, const std::string& what) {
        if (!eat(ch)) fail("expected '" + std::string(1, ch) + "' " + what);
    }

    std::string ident() {
        skip_spaces();
        std::size_t start = pos;
        while (!done() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected identifier");
        return text.substr(start, pos - start);
    }

    long integer() {
        skip_spaces();
        long value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc() || ptr == text.data() + pos) fail("expected integer");
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    double number() {
        skip_spaces();
        double value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc() || ptr == text.data() + pos) fail("expected number");
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    // Decimal literal, `pi`, or a pi-multiple like pi/4, 3*pi/4, -pi/2.
    double angle() {
        skip_spaces();
        double sign = 1.0;
        if (eat('-')) sign = -1.0;
        else eat('+');
        skip_spaces();

        double value;
        bool saw_pi = false;
        if (text.compare(pos, 2, "pi") == 0) {
            pos += 2;
            value = std::numbers::pi;
            saw_pi = true;
        } else {
            value = number();
            skip_spaces();
            if (eat('*')) {
                skip_spaces();
                if (text.compare(pos, 2, "pi") != 0) fail("expected 'pi' after '*'");
                pos += 2;
                value *= std::numbers::pi;
                saw_pi = true;
            }
        }
        skip_spaces();
        if (eat('/')) {
            if (!saw_pi) fail("fractions are only supported for pi-multiples");
            skip_spaces();
            const double den = number();
            if (den == 0) fail("division by zero in angle");
            value /= den;
        }
        return sign * value;
    }
};

struct Parser {
    std::string register_name;
    int n = -1;
    bool saw_version = false;

    Circuit circuit;

    bool in_amplification = false;
    bool amplification_done = false;
    bool in_iteration = false;
    double theta = 0.0;
    std::size_t segment_begin = 0;

    // A statement may be followed only by whitespace or an ordinary comment.
    void end_of_line(Cursor& cur) {
        cur.skip_spaces();
        if (cur.done()) return;
        if (cur.text.compare(cur.pos, std::string_view(kPragmaPrefix).size(), kPragmaPrefix) == 0)
            cur.fail("intrinsic pragma must be on its own line");
        if (cur.text.compare(cur.pos, 2, "//") == 0) return;
        cur.fail("one statement per line");
    }

    int qubit_operand(Cursor& cur) {
        cur.skip_spaces();
        const int col = cur.column();
        const std::string name = cur.ident();
        if (name != register_name)
            throw ParseError("unknown register '" + name + "'", cur.line, col);
        cur.skip_spaces();
        cur.expect('[', "before qubit index");
        const long q = cur.integer();
        cur.skip_spaces();
        cur.expect(']', "after qubit index");
        if (q < 0 || q >= n)
            throw ParseError("qubit index " + std::to_string(q) + " out of range for qreg of size " +
                                 std::to_string(n),
                             cur.line, col);
        return static_cast<int>(q);
    }

    void gate_statement(Cursor& cur, const std::string& name) {
        if (n < 0) cur.fail("gate statement before qreg declaration");
        if (amplification_done) cur.fail("gate after amplification block");
        if (in_amplification && !in_iteration)
            cur.fail("gate inside amplification block but outside an iteration");

        GateOp g;
        if (name == "rz") {
            cur.skip_spaces();
            cur.expect('(', "after rz");
            const double a = cur.angle();
            cur.skip_spaces();
            cur.expect(')', "after angle");
            g = make_rz(qubit_operand(cur), a);
        } else if (name == "sx") {
            g = make_sx(qubit_operand(cur));
        } else if (name == "x") {
            g = make_x(qubit_operand(cur));
        } else if (name == "h") {
            g = make_h(qubit_operand(cur));
        } else if (name == "cx") {
            const int a = qubit_operand(cur);
            cur.skip_spaces();
            cur.expect(',', "between cx operands");
            const int b = qubit_operand(cur);
            if (a == b) cur.fail("duplicate qubit in cx");
            g = make_cx(a, b);
        } else {
            cur.fail("unknown gate '" + name + "'");
        }
        cur.skip_spaces();
        cur.expect(';', "at end of statement");
        end_of_line(cur);
        circuit.gates.push_back(std::move(g));
    }

    void pragma(Cursor& cur) {
        cur.pos += std::string_view(kPragmaPrefix).size();
        cur.skip_spaces();
        const std::string name = cur.ident();
        if (name == "amplification_begin") {
            if (in_amplification || amplification_done) cur.fail("nested amplification block");
            cur.skip_spaces();
            const std::string key = cur.ident();
            if (key != "theta") cur.fail("expected 'theta=<value>'");
            cur.skip_spaces();
            cur.expect('=', "after theta");
            theta = cur.number();
            if (!(theta > 0.0) || !(theta < std::numbers::pi / 2))
                cur.fail("theta out of range (0, pi/2)");
            in_amplification = true;
        } else if (name == "amplification_end") {
            if (!in_amplification || in_iteration) cur.fail("unbalanced intrinsic amplification_end");
            in_amplification = false;
            amplification_done = true;
        } else if (name == "iteration_begin") {
            if (!in_amplification || in_iteration) cur.fail("unbalanced intrinsic iteration_begin");
            in_iteration = true;
            segment_begin = circuit.gates.size();
        } else if (name == "iteration_end") {
            if (!in_iteration) cur.fail("unbalanced intrinsic iteration_end");
            in_iteration = false;
            circuit.segments.push_back(Segment{segment_begin, circuit.gates.size()});
        } else {
            cur.fail("unknown intrinsic '" + name + "'");
        }
        cur.skip_spaces();
        if (!cur.done()) cur.fail("trailing characters after intrinsic");
    }

    void statement_line(Cursor& cur) {
        cur.skip_spaces();
        if (cur.done()) return;
        if (cur.text.compare(cur.pos, std::string_view(kPragmaPrefix).size(), kPragmaPrefix) == 0) {
            pragma(cur);
            return;
        }
        if (cur.text.compare(cur.pos, 2, "//") == 0) return; // ordinary comment

        const int col = cur.column();
        const std::string head = cur.ident();
        if (head == "OPENQASM") {
            if (saw_version) cur.fail("duplicate version header");
            cur.skip_spaces();
            cur.number();
            cur.skip_spaces();
            cur.expect(';', "at end of statement");
            end_of_line(cur);
            saw_version = true;
            return;
        }
        if (!saw_version) throw ParseError("missing OPENQASM version header", cur.line, col);
        if (head == "qreg") {
            if (n >= 0) cur.fail("only one qreg is supported");
            register_name = cur.ident();
            cur.skip_spaces();
            cur.expect('[', "before register size");
            const long size = cur.integer();
            cur.skip_spaces();
            cur.expect(']', "after register size");
            cur.skip_spaces();
            cur.expect(';', "at end of statement");
            end_of_line(cur);
            if (size < 1 || size > 30) cur.fail("register size out of range [1, 30]");
            n = static_cast<int>(size);
            circuit.n = n;
            return;
        }
        gate_statement(cur, head);
    }

    Circuit finish(int last_line) {
        if (in_iteration) throw ParseError("unbalanced intrinsic: iteration block never closed", last_line, 1);
        if (in_amplification)
            throw ParseError("unbalanced intrinsic: amplification block never closed", last_line, 1);
        if (n < 0) throw ParseError("missing qreg declaration", last_line, 1);

        if (amplification_done) {
            const double N = std::ldexp(1.0, n);
            const double s = std::sin(theta);
            int m = static_cast<int>(std::llround(N * s * s));
            m = std::max(1, std::min(static_cast<int>(N) - 1, m));
            const auto params = synth::grover_params(m, n);
            circuit.meta = AmplificationMeta{theta, params.t_opt, m, n};
        }
        return circuit;
    }
};

std::string format_angle(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace

Circuit parse(const std::string& text) {
    Parser parser;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
        Cursor cur{line, 0, line_no};
        parser.statement_line(cur);
        if (end == text.size()) break;
        start = end + 1;
    }
    return parser.finish(std::max(1, line_no));
}

std::string emit(const Circuit& c) {
    if (auto violations = validate(c); !violations.empty())
        throw std::invalid_argument("invalid circuit: " + violations.front());
    for (const GateOp& g : c.gates)
        if (g.kind == GateKind::MCPHASE)
            throw std::invalid_argument("mcphase must be lowered before emit");

    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "qreg q[" << c.n << "];\n";

    auto write_gate = [&](const GateOp& g) {
        switch (g.kind) {
            case GateKind::RZ:
                out << "rz(" << format_angle(g.angle) << ") q[" << g.qubits[0] << "];\n";
                break;
            case GateKind::SX: out << "sx q[" << g.qubits[0] << "];\n"; break;
            case GateKind::X: out << "x q[" << g.qubits[0] << "];\n"; break;
            case GateKind::H: out << "h q[" << g.qubits[0] << "];\n"; break;
            case GateKind::CX:
                out << "cx q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n";
                break;
            case GateKind::MCPHASE: break; // rejected above
        }
    };

    const std::size_t preamble = c.preamble_end();
    for (std::size_t i = 0; i < preamble; ++i) write_gate(c.gates[i]);
    if (c.meta) {
        out << kPragmaPrefix << " amplification_begin theta=" << format_angle(c.meta->theta) << "\n";
        for (const Segment& s : c.segments) {
            out << kPragmaPrefix << " iteration_begin\n";
            for (std::size_t i = s.begin; i < s.end; ++i) write_gate(c.gates[i]);
            out << kPragmaPrefix << " iteration_end\n";
        }
        out << kPragmaPrefix << " amplification_end\n";
    }
    return out.str();
}

Circuit load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void save_file(const Circuit& c, const std::string& path) {
    const std::string text = emit(c);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace ampopt::qasm
