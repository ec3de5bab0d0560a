#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairaudit {

using UtilityVector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance for comparing cached floating-point utilities against
// floors; keeps the audited outcome feasible for its own floor system.
inline constexpr double kFloorTol = 1e-9;

// A violation has to clear the current value by this much to count as strict.
inline constexpr double kStrictTol = 1e-9;

// Ratio conventions shared by the criteria: positive/0 is +inf; the caller
// picks what 0/0 means in its context (excluded, neutral 1, ...).
inline double safe_ratio(double num, double den, double zero_over_zero) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? kInf : zero_over_zero;
}

inline bool is_inf(double x) { return std::isinf(x) && x > 0; }

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ScaleCapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_dims(bool cond, const std::string& msg) {
    if (!cond) throw DimensionError(msg);
}

}  // namespace fairaudit
