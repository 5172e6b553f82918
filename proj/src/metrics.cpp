#include "ecgsyn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <vector>

namespace ecgsyn {

std::string distance_name(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::Dtw: return "dtw";
        case DistanceKind::Frechet: return "frechet";
        case DistanceKind::Euclidean: return "euclid";
    }
    return "dtw";
}

DistanceKind distance_from_name(const std::string& name) {
    if (name == "dtw") return DistanceKind::Dtw;
    if (name == "frechet") return DistanceKind::Frechet;
    if (name == "euclid" || name == "euclidean") return DistanceKind::Euclidean;
    throw Error("BadDistance", "unknown distance function: " + name);
}

double euclidean(const Beat& x, const Beat& y) {
    if (x.size() != y.size()) {
        throw Error("LengthMismatch", std::to_string(x.size()) + " vs " +
                                          std::to_string(y.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

namespace {

inline double local_cost(double a, double b, DtwOptions::LocalCost kind) {
    const double d = std::abs(a - b);
    return kind == DtwOptions::LocalCost::SquaredDifference ? d * d : d;
}

} // namespace

double dtw(const Beat& x, const Beat& y, const DtwOptions& opts) {
    if (x.empty() || y.empty()) throw Error("LengthZero", "dtw needs non-empty series");
    if (opts.band_radius && *opts.band_radius < 0) {
        throw Error("BandTooNarrow", "band radius must be >= 0");
    }
    // Roll over the shorter series to keep the two rows small.
    const Beat& rows = x.size() >= y.size() ? x : y;
    const Beat& cols = x.size() >= y.size() ? y : x;
    const std::size_t m = rows.size(), n = cols.size();
    if (opts.band_radius &&
        m - n > static_cast<std::size_t>(*opts.band_radius)) {
        throw Error("BandTooNarrow", "length difference exceeds band radius");
    }
    const double inf = std::numeric_limits<double>::infinity();
    const auto band = opts.band_radius;
    const auto in_band = [&](std::size_t i, std::size_t j) {
        if (!band) return true;
        const auto di = static_cast<long long>(i) - static_cast<long long>(j);
        return std::llabs(di) <= static_cast<long long>(*band);
    };

    std::vector<double> prev(n, inf), cur(n, inf);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_band(i, j)) {
                cur[j] = inf;
                continue;
            }
            const double c = local_cost(rows[i], cols[j], opts.local_cost);
            if (i == 0 && j == 0) {
                cur[j] = c;
            } else if (i == 0) {
                cur[j] = cur[j - 1] + c;
            } else if (j == 0) {
                cur[j] = prev[j] + c;
            } else {
                cur[j] = c + std::min({prev[j], cur[j - 1], prev[j - 1]});
            }
        }
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

double frechet(const Beat& x, const Beat& y) {
    if (x.empty() || y.empty()) {
        throw Error("LengthZero", "frechet needs non-empty series");
    }
    const std::size_t m = x.size(), n = y.size();
    std::vector<double> prev(n), cur(n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::abs(x[i] - y[j]);
            if (i == 0 && j == 0) {
                cur[j] = d;
            } else if (i == 0) {
                cur[j] = std::max(cur[j - 1], d);
            } else if (j == 0) {
                cur[j] = std::max(prev[j], d);
            } else {
                cur[j] = std::max(d, std::min({prev[j], cur[j - 1], prev[j - 1]}));
            }
        }
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

double distance(const Beat& x, const Beat& y, DistanceKind kind,
                const DtwOptions& opts) {
    switch (kind) {
        case DistanceKind::Dtw: return dtw(x, y, opts);
        case DistanceKind::Frechet: return frechet(x, y);
        case DistanceKind::Euclidean: return euclidean(x, y);
    }
    throw Error("BadDistance", "unreachable");
}

namespace {

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

double cross_mean_distance(const BeatSet& a, const BeatSet& b, DistanceKind kind,
                           unsigned threads, const DtwOptions& opts) {
    if (a.empty() || b.empty()) throw Error("EmptySet", "cross_mean_distance");
    const std::size_t na = a.count(), nb = b.count();

    // One partial sum per row of A, each computed in a fixed inner order.
    // The partials are then folded in row order, so chunk assignment to
    // threads cannot change the result.
    std::vector<double> row_sums(na, 0.0);
    const auto compute_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            KahanSum row;
            for (std::size_t j = 0; j < nb; ++j) {
                row.add(distance(a.beats[i], b.beats[j], kind, opts));
            }
            row_sums[i] = row.sum;
        }
    };

    unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(na)));
    if (n_threads == 1) {
        compute_rows(0, na);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (na + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(na, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(compute_rows, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    KahanSum total;
    for (double s : row_sums) total.add(s);
    return total.sum / (static_cast<double>(na) * static_cast<double>(nb));
}

} // namespace ecgsyn
