#pragma once

#include <stdexcept>
#include <string>

namespace presale {

/// Invalid model primitive or offer (violated H > L > 0, q in (0,1), ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// An action label that is not available at the queried node.
class InvalidAction : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The purchase decision is not a downward-closed set of advance prices on
/// the bisection bracket; the message lists the offending sample points.
class NotMonotone : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// No degenerate plan is credible at every decision node.  Surfaced, never
/// swallowed: callers are expected to log the instance.
class NoEquilibrium : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Root-finding bracket carries no sign change.
class BracketError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration text.  `line()` is the 1-based input
/// line, or 0 when the problem is not attributable to a single line.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

} // namespace presale
