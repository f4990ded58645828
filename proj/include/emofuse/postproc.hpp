#pragma once

#include <string>
#include <string_view>

#include "emofuse/common.hpp"

namespace emofuse {

// Range and spread of the training labels; the scalers map raw model
// outputs back toward this scale.
struct LabelStats {
    double min_l = 0.0;
    double max_l = 0.0;
    double sigma_l = 0.0;  // population std
};

enum class ScalerKind { none, min_max, std_ratio, decimal };

ScalerKind parse_scaler(std::string_view s);
std::string to_string(ScalerKind kind);

double population_std(const Eigen::Ref<const Vec>& v);
LabelStats compute_label_stats(const Eigen::Ref<const Vec>& labels);

// Affine map of the prediction range [min_p, max_p] onto [min_l, max_l].
Vec min_max_scale(const Eigen::Ref<const Vec>& y, const LabelStats& stats);

// Rescale so the output's population std equals sigma_l. With literal_ratio
// the reciprocal factor sigma_p/sigma_l is applied instead.
Vec std_ratio_scale(const Eigen::Ref<const Vec>& y, const LabelStats& stats,
                    bool literal_ratio = false);

struct DecimalScaled {
    Vec values;
    int exponent = 0;  // values = y / 10^exponent
};

// Divide by the smallest power of ten that brings max|y| below 1.
DecimalScaled decimal_scale(const Eigen::Ref<const Vec>& y);

Vec apply_scaler(ScalerKind kind, const Eigen::Ref<const Vec>& y,
                 const LabelStats& stats, bool literal_ratio = false);

}  // namespace emofuse
