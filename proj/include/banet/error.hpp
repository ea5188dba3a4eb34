#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace banet {

/// Base of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based.
class parse_error : public error
{
public:
    parse_error(const std::string& message, std::size_t line, std::size_t column)
        : error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Well-formed input that violates a structural rule (undefined names,
/// overlapping blocks, cyclic precedence, ...).
class validation_error : public error
{
public:
    using error::error;
};

/// The requested analysis would exceed the configured state-space cap.
class cap_exceeded : public error
{
public:
    cap_exceeded(std::size_t n, std::size_t cap)
        : error("network has " + std::to_string(n) + " automata; cap is " + std::to_string(cap)),
          n_(n), cap_(cap)
    {
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t n_;
    std::size_t cap_;
};

} // namespace banet
