#pragma once

#include <algorithm>
#include <cmath>

#include "emofuse/common.hpp"

namespace emofuse {

inline void check_scored_pair(const Eigen::Ref<const Vec>& predictions,
                              const Eigen::Ref<const Vec>& gold,
                              Index min_len) {
    if (predictions.size() != gold.size())
        throw InputError("scored pair: length mismatch (" +
                         std::to_string(predictions.size()) + " vs " +
                         std::to_string(gold.size()) + ")");
    if (predictions.size() < min_len)
        throw InputError("scored pair: need at least " + std::to_string(min_len) +
                         " samples, got " + std::to_string(predictions.size()));
    if (!predictions.allFinite() || !gold.allFinite())
        throw InputError("scored pair: non-finite value");
}

// Mean squared error over a pair of equal-length series.
inline double mse(const Eigen::Ref<const Vec>& predictions,
                  const Eigen::Ref<const Vec>& gold) {
    check_scored_pair(predictions, gold, 1);
    return (predictions - gold).squaredNorm() /
           static_cast<double>(predictions.size());
}

// Concordance correlation coefficient with population (divide-by-m) moments.
// Both series constant with equal means is taken as perfect concordance (1.0);
// unequal constants fall out of the formula as 0.
inline double ccc(const Eigen::Ref<const Vec>& predictions,
                  const Eigen::Ref<const Vec>& gold) {
    check_scored_pair(predictions, gold, 2);
    const double m = static_cast<double>(predictions.size());
    const double mean_p = predictions.mean();
    const double mean_g = gold.mean();
    const Vec dp = predictions.array() - mean_p;
    const Vec dg = gold.array() - mean_g;
    const double var_p = dp.squaredNorm() / m;
    const double var_g = dg.squaredNorm() / m;
    const double cov = dp.dot(dg) / m;
    const double mean_gap = mean_p - mean_g;
    const double denom = var_p + var_g + mean_gap * mean_gap;
    if (denom == 0.0) return 1.0;
    return std::clamp(2.0 * cov / denom, -1.0, 1.0);
}

}  // namespace emofuse
