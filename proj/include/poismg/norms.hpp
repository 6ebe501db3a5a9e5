// Discrete error norms and convergence-order estimation.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poismg/field.hpp"

namespace poismg {

/// L-infinity, root-mean-square L2 and mean L1 norms of a nodewise difference.
/// All nodes participate, boundary included.
struct ErrorNorms {
    double l_inf = 0.0;
    double l2 = 0.0;
    double l1 = 0.0;
};

inline ErrorNorms error_norms(const ScalarField& numerical, const ScalarField& exact) {
    require_same_grid(numerical, exact, "error_norms");
    ErrorNorms n;
    double sum_sq = 0.0, sum_abs = 0.0;
    const std::size_t count = numerical.values.size();
    for (std::size_t k = 0; k < count; ++k) {
        const double d = std::abs(numerical.values[k] - exact.values[k]);
        n.l_inf = std::max(n.l_inf, d);
        sum_sq += d * d;
        sum_abs += d;
    }
    n.l2 = std::sqrt(sum_sq / static_cast<double>(count));
    n.l1 = sum_abs / static_cast<double>(count);
    return n;
}

/// Least-squares slope of log(error) against log(dx). Slope 2 means the
/// error shrinks quadratically under refinement.
inline double convergence_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3)
        throw std::invalid_argument("convergence_slope: need at least 3 (dx, error) pairs");
    double sx = 0.0, sy = 0.0;
    for (const auto& [dx, err] : pairs) {
        if (!(dx > 0.0) || !(err > 0.0))
            throw std::invalid_argument("convergence_slope: dx and error must be positive");
        sx += std::log(dx);
        sy += std::log(err);
    }
    const double mx = sx / pairs.size();
    const double my = sy / pairs.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [dx, err] : pairs) {
        const double u = std::log(dx) - mx;
        sxx += u * u;
        sxy += u * (std::log(err) - my);
    }
    return sxy / sxx;
}

}  // namespace poismg
