#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace adwords {

using ResourceId = std::size_t;

/// Base class for all library errors; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid instance data. `field()` names the offending entry.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A budget-aware policy was asked to run on an instance whose budgets are hidden.
class BudgetVisibilityError : public Error {
public:
    using Error::Error;
};

// Absolute tolerance for "budget exhausted" and "interval ended" decisions.
inline constexpr double kEventTol = 1e-9;

// Tolerance used by the pathwise lemma checks.
inline constexpr double kCheckTol = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// How argmax ties between equal bid prices are resolved.
enum class TieBreak { LowestId, HighestId };

inline std::string to_string(TieBreak tb) {
    return tb == TieBreak::LowestId ? "lowest-id" : "highest-id";
}

inline TieBreak tie_break_from_string(const std::string& s) {
    if (s == "lowest-id") return TieBreak::LowestId;
    if (s == "highest-id") return TieBreak::HighestId;
    throw PreconditionError("unknown tie-break rule '" + s + "'");
}

/// True when candidate `a` with price `pa` beats the incumbent `b` with price `pb`.
inline bool beats(double pa, ResourceId a, double pb, ResourceId b, TieBreak tb) {
    if (pa != pb) return pa > pb;
    return tb == TieBreak::LowestId ? a < b : a > b;
}

/// The trade-off function g(x) = exp(beta (x - 1)).
class TradeoffFunction {
public:
    explicit TradeoffFunction(double beta) : beta_(beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw PreconditionError("beta must be a positive finite real");
    }

    double beta() const noexcept { return beta_; }
    double operator()(double x) const { return std::exp(beta_ * (x - 1.0)); }
    /// 1 - g(x), computed without cancellation near x = 1.
    double complement(double x) const { return -std::expm1(beta_ * (x - 1.0)); }
    /// Inverse of g restricted to (0, 1].
    double inverse(double u) const { return 1.0 + std::log(u) / beta_; }

private:
    double beta_;
};

inline constexpr double kDefaultBeta = 1.15;

} // namespace adwords
