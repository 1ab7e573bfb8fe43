#ifndef WPTSIM_ERRORS_HPP
#define WPTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wptsim {

/// Error taxonomy shared by the C++ core and the C API (wptsim.h maps each
/// subclass onto a wpt_status code).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
  public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

class OutOfRange : public Error {
  public:
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

/// Malformed input data (CSV rows, config syntax). Carries a 1-based line
/// number when the source is line oriented, 0 otherwise.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed input that violates a documented invariant (non-monotone time,
/// negative power, inconsistent sample rate, ...).
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace wptsim

#endif
