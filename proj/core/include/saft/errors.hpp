#pragma once

#include <stdexcept>
#include <string>

namespace saft {

/// Error raised while reading any of the textual model languages.
/// Carries a 1-based line/column position into the offending text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column,
               std::string file = {})
        : std::runtime_error(format(message, line, column, file)),
          message_(std::move(message)),
          line_(line),
          column_(column),
          file_(std::move(file)) {}

    explicit ParseError(std::string message, std::string file = {})
        : ParseError(std::move(message), 0, 0, std::move(file)) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& file() const noexcept { return file_; }

    ParseError with_file(std::string file) const {
        return ParseError(message_, line_, column_, std::move(file));
    }

private:
    static std::string format(const std::string& message, std::size_t line,
                              std::size_t column, const std::string& file) {
        std::string out;
        if (!file.empty()) out += file + ":";
        if (line > 0) {
            out += std::to_string(line) + ":" + std::to_string(column) + ":";
        }
        if (!out.empty()) out += " ";
        return out + message;
    }

    std::string message_;
    std::size_t line_;
    std::size_t column_;
    std::string file_;
};

/// Violation of a structural model invariant (dangling reference,
/// duplicate name, dependency cycle, invalid tree shape, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside the quantitative analysis (state-space cap exceeded,
/// degenerate rates, malformed DFT structure).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace saft
