#pragma once

#include <optional>
#include <string>

#include "ecgsyn/dataset.hpp"

namespace ecgsyn {

enum class DistanceKind { Dtw, Frechet, Euclidean };

std::string distance_name(DistanceKind kind);
DistanceKind distance_from_name(const std::string& name);

struct DtwOptions {
    enum class LocalCost { AbsoluteDifference, SquaredDifference };
    LocalCost local_cost = LocalCost::AbsoluteDifference;
    /// Sakoe-Chiba window half-width; unset means unconstrained.
    std::optional<int> band_radius;
};

/// sqrt(sum (x_i - y_i)^2); requires equal lengths.
double euclidean(const Beat& x, const Beat& y);

/// Dynamic time warping cost with D(1,1) = f(x_1, y_1) and cumulative
/// first row/column. Two-row rolling DP, O(min(M,N)) memory.
double dtw(const Beat& x, const Beat& y, const DtwOptions& opts = {});

/// Discrete Frechet distance; pointwise distance is |x_i - y_j|.
double frechet(const Beat& x, const Beat& y);

double distance(const Beat& x, const Beat& y, DistanceKind kind,
                const DtwOptions& opts = {});

/// Mean of DF(a_i, b_j) over the full pair grid. Parallelized over rows
/// of A with a fixed-order compensated reduction, so the result is
/// bit-identical for any thread count. threads == 0 picks the hardware
/// concurrency.
double cross_mean_distance(const BeatSet& a, const BeatSet& b, DistanceKind kind,
                           unsigned threads = 0, const DtwOptions& opts = {});

} // namespace ecgsyn
