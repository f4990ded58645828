#include "emofuse/postproc.hpp"

#include <cmath>

namespace emofuse {

ScalerKind parse_scaler(std::string_view s) {
    if (s == "none") return ScalerKind::none;
    if (s == "minmax") return ScalerKind::min_max;
    if (s == "stdratio") return ScalerKind::std_ratio;
    if (s == "decimal") return ScalerKind::decimal;
    throw InputError("unknown scaler: " + std::string(s));
}

std::string to_string(ScalerKind kind) {
    switch (kind) {
        case ScalerKind::none: return "none";
        case ScalerKind::min_max: return "minmax";
        case ScalerKind::std_ratio: return "stdratio";
        case ScalerKind::decimal: return "decimal";
    }
    throw InputError("unknown scaler kind");
}

double population_std(const Eigen::Ref<const Vec>& v) {
    if (v.size() == 0) throw InputError("population_std: empty vector");
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() /
                     static_cast<double>(v.size()));
}

LabelStats compute_label_stats(const Eigen::Ref<const Vec>& labels) {
    if (labels.size() == 0) throw InputError("label stats: empty labels");
    if (!labels.allFinite()) throw InputError("label stats: non-finite label");
    return {labels.minCoeff(), labels.maxCoeff(), population_std(labels)};
}

Vec min_max_scale(const Eigen::Ref<const Vec>& y, const LabelStats& stats) {
    if (y.size() == 0) throw InputError("min_max_scale: empty input");
    const double min_p = y.minCoeff();
    const double max_p = y.maxCoeff();
    if (max_p == min_p)
        throw DegenerateInputError("min_max_scale: constant predictions");
    return (stats.max_l - stats.min_l) * (y.array() - min_p) / (max_p - min_p) +
           stats.min_l;
}

Vec std_ratio_scale(const Eigen::Ref<const Vec>& y, const LabelStats& stats,
                    bool literal_ratio) {
    const double sigma_p = population_std(y);
    if (literal_ratio) {
        if (stats.sigma_l == 0.0)
            throw DegenerateInputError("std_ratio_scale: sigma_l is zero");
        return (sigma_p / stats.sigma_l) * y;
    }
    if (sigma_p == 0.0)
        throw DegenerateInputError("std_ratio_scale: constant predictions");
    return (stats.sigma_l / sigma_p) * y;
}

DecimalScaled decimal_scale(const Eigen::Ref<const Vec>& y) {
    if (!y.allFinite()) throw InputError("decimal_scale: non-finite input");
    const double peak = y.size() == 0 ? 0.0 : y.cwiseAbs().maxCoeff();
    if (peak == 0.0) return {y, 0};
    int k = static_cast<int>(std::floor(std::log10(peak))) + 1;
    while (peak / std::pow(10.0, k) >= 1.0) ++k;
    while (peak / std::pow(10.0, k - 1) < 1.0) --k;
    return {y / std::pow(10.0, k), k};
}

Vec apply_scaler(ScalerKind kind, const Eigen::Ref<const Vec>& y,
                 const LabelStats& stats, bool literal_ratio) {
    switch (kind) {
        case ScalerKind::none: return y;
        case ScalerKind::min_max: return min_max_scale(y, stats);
        case ScalerKind::std_ratio: return std_ratio_scale(y, stats, literal_ratio);
        case ScalerKind::decimal: return decimal_scale(y).values;
    }
    throw InputError("unknown scaler kind");
}

}  // namespace emofuse
