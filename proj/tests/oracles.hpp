// Independent brute-force oracles used to check the DP implementations
// and the analytic gradients. Kept deliberately naive.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracles {

// Minimum accumulated |x_i - y_j| over all monotone warping paths from
// (0,0) to (M-1,N-1) with steps (1,0), (0,1), (1,1). Exponential DFS;
// only usable for short series.
inline double dtw_brute(const std::vector<double>& x, const std::vector<double>& y) {
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk =
        [&](std::size_t i, std::size_t j, double acc) {
            acc += std::abs(x[i] - y[j]);
            if (acc >= best) return;
            if (i + 1 == x.size() && j + 1 == y.size()) {
                best = acc;
                return;
            }
            if (i + 1 < x.size() && j + 1 < y.size()) walk(i + 1, j + 1, acc);
            if (i + 1 < x.size()) walk(i + 1, j, acc);
            if (j + 1 < y.size()) walk(i, j + 1, acc);
        };
    walk(0, 0, 0.0);
    return best;
}

// Minimum over all couplings of the maximum link distance.
inline double frechet_brute(const std::vector<double>& x, const std::vector<double>& y) {
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk =
        [&](std::size_t i, std::size_t j, double acc) {
            acc = std::max(acc, std::abs(x[i] - y[j]));
            if (acc >= best) return;
            if (i + 1 == x.size() && j + 1 == y.size()) {
                best = acc;
                return;
            }
            if (i + 1 < x.size() && j + 1 < y.size()) walk(i + 1, j + 1, acc);
            if (i + 1 < x.size()) walk(i + 1, j, acc);
            if (j + 1 < y.size()) walk(i, j + 1, acc);
        };
    walk(0, 0, 0.0);
    return best;
}

// Central finite difference of a scalar function of one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x0,
                           double h = 1e-5) {
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

inline double rel_error(double analytic, double numeric) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    return std::abs(analytic - numeric) / denom;
}

} // namespace oracles
