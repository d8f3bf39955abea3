#pragma once

#include <stdexcept>
#include <string>

namespace prefplan {

struct SourcePos {
    int line = 0;  // 1-based; 0 means "no position"
    int col = 0;
};

/// Single error type for the whole library. The code tells callers (and
/// tests) what went wrong; the message carries the human-readable details,
/// including source positions for parse/resolution errors.
class Error : public std::runtime_error {
public:
    enum class Code {
        Parse,
        Resolve,
        UnknownFluent,
        UnknownAction,
        UnboundVariable,
        EmptySort,
        Inconsistent,
        NotAState,
        NotExecutable,
        IndexOutOfRange,
        NameClash,
        TooManyDesires,
        CostOverflow,
        ArithmeticOverflow,
        NotStratified,
        InvalidPlan,
        Io,
    };

    Error(Code code, std::string message, SourcePos pos = {})
        : std::runtime_error(format(code, message, pos)), code_(code), pos_(pos) {}

    Code code() const { return code_; }
    SourcePos pos() const { return pos_; }

private:
    static std::string format(Code code, const std::string& message, SourcePos pos) {
        std::string out;
        if (pos.line > 0) {
            out += "line " + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": ";
        }
        out += message;
        (void)code;
        return out;
    }

    Code code_;
    SourcePos pos_;
};

[[noreturn]] inline void fail(Error::Code code, const std::string& message, SourcePos pos = {}) {
    throw Error(code, message, pos);
}

}  // namespace prefplan
