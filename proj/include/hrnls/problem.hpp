#pragma once

#include <variant>

namespace hrnls {

/// One sech soliton: amplitude parameter a, speed c, initial centre x0.
struct SolitonParams {
    double a = 1.0;
    double c = 1.0;
    double x0 = 0.0;

    bool operator==(const SolitonParams&) const = default;
};

struct SingleSoliton {
    SolitonParams s;
    bool operator==(const SingleSoliton&) const = default;
};

struct TwoSoliton {
    SolitonParams first;
    SolitonParams second;
    bool operator==(const TwoSoliton&) const = default;
};

/// psi_0 = sech(x); a bound state of n solitons when q = 2 n^2.
struct SechPulse {
    bool operator==(const SechPulse&) const = default;
};

using InitialCondition = std::variant<SingleSoliton, TwoSoliton, SechPulse>;

/// i psi_t + psi_xx + q |psi|^2 psi = 0 on [left, right] x (0, final_time].
struct ProblemConfig {
    double q = 1.0;
    double left = -30.0;
    double right = 70.0;
    double final_time = 30.0;
    InitialCondition initial{SingleSoliton{}};

    /// Throws ConfigError unless q > 0, left < right, final_time >= 0.
    void validate() const;

    bool operator==(const ProblemConfig&) const = default;
};

} // namespace hrnls
