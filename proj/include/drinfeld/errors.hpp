#pragma once
#include <stdexcept>
#include <string>

namespace drinfeld {

// exit code 2 in the CLI
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit code 3: a valuation or coefficient is not determined at the working precision
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : PreconditionError {
    std::size_t line = 0;    // 1-based, 0 when not line oriented
    std::size_t column = 0;  // 1-based
    ParseError(const std::string& msg, std::size_t line_, std::size_t col_)
        : PreconditionError(format(msg, line_, col_)), line(line_), column(col_) {}

private:
    static std::string format(const std::string& m, std::size_t l, std::size_t c) {
        std::string s = "parse error";
        if (l) s += " at line " + std::to_string(l);
        s += (l ? ", column " : " at position ") + std::to_string(c);
        return s + ": " + m;
    }
};

}  // namespace drinfeld
