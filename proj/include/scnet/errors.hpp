#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace scnet {

// Vector length does not match the declared n or m of a constraint set.
class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A caller broke a documented precondition (cyclic graph passed to the sort,
// unsatisfiable term passed to reorder, ...).
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// solve() would have to enumerate more disjuncts than its budget allows.
// Distinct from an unsatisfiable (bottom) result.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Brute-force oracles refuse instances above their factorial/exponential cap.
class OracleGuardError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class ParseErrorKind {
    MalformedJson,
    Schema,
    UnknownOp,
    IndexOutOfRange,
    CoeffLength,
    Csv,
};

inline const char* to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::MalformedJson: return "malformed-json";
    case ParseErrorKind::Schema: return "schema";
    case ParseErrorKind::UnknownOp: return "unknown-op";
    case ParseErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ParseErrorKind::CoeffLength: return "coeff-length";
    case ParseErrorKind::Csv: return "csv";
    }
    return "unknown";
}

// `location` is a JSON pointer for constraint files and "row N" / "line N"
// for CSV inputs.
class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, std::string location, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " at " + location + ": " + message),
          kind_(kind), location_(std::move(location)) {}

    [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& location() const noexcept { return location_; }

  private:
    ParseErrorKind kind_;
    std::string location_;
};

} // namespace scnet
