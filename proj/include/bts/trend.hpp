#pragma once

// Monotonicity verdicts and log-log slopes for residual sequences indexed by n.

#include <bts/error.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace bts {

enum class Verdict { decreasing, non_increasing, violated };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::decreasing:
            return "decreasing";
        case Verdict::non_increasing:
            return "non-increasing";
        case Verdict::violated:
            return "violated";
    }
    return "violated";
}

/// Residuals at or below this multiple of the reference scale count as exact zeros.
inline constexpr double kExactZeroRelative = 1e-9;

/// `decreasing` iff every consecutive value strictly drops.
inline Verdict classify_sequence(const std::vector<double>& values) {
    bool strict = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[i - 1]) return Verdict::violated;
        if (!(values[i] < values[i - 1])) strict = false;
    }
    return strict ? Verdict::decreasing : Verdict::non_increasing;
}

/// Least-squares slope of log y against log x; nullopt with fewer than 3
/// points or any non-positive value.
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("loglog_slope: size mismatch");
    if (x.size() < 3) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(x.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (m * sxy - sx * sy) / denom;
}

}  // namespace bts
