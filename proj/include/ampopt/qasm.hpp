#pragma once

#include "ampopt/ir.hpp"

#include <stdexcept>
#include <string>

namespace ampopt::qasm {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses the OpenQASM-2 subset with `// @ampopt` intrinsic pragmas.
/// Throws ParseError with a 1-based line/column on malformed input.
Circuit parse(const std::string& text);

/// Canonical text form: one statement per line, angles at 17 significant
/// digits, intrinsic pragmas at segment boundaries, '\n' line endings.
/// Throws std::invalid_argument on an invalid circuit.
std::string emit(const Circuit& c);

Circuit load_file(const std::string& path);
void save_file(const Circuit& c, const std::string& path);

} // namespace ampopt::qasm
