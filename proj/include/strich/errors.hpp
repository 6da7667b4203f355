#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strich {

// Error taxonomy mirrored by the CLI exit codes:
//   parse_error -> 2, config_error -> 3, consistency_error -> 4, anything else -> 1.

/// Malformed input data (contact files, metadata, cached artifacts).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg), line_(0) {}
    parse_error(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    /// 1-based input line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration (bad window width, weights not summing to 1, k out of range, ...).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant violated; signals a bug upstream, not bad user input.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Domain violations on otherwise valid structures (unknown node, off-grid instant).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace strich
