#include "emofuse/align.hpp"

#include <cmath>

#include "emofuse/metrics.hpp"

namespace emofuse {

Index DelaySpec::frames() const {
    if (frame_period_seconds <= 0.0)
        throw InputError("delay spec: frame period must be positive");
    if (delay_seconds < 0.0)
        throw InputError("delay spec: delay must be nonnegative");
    return static_cast<Index>(std::lround(delay_seconds / frame_period_seconds));
}

Vec shift_frames(const Eigen::Ref<const Vec>& y, Index k) {
    if (k < 0) throw InputError("shift_frames: negative shift");
    const Index n = y.size();
    if (k >= n)
        throw InputError("shift_frames: shift " + std::to_string(k) +
                         " >= length " + std::to_string(n));
    if (k == 0) return y;
    Vec out(n);
    out.head(k).setConstant(y[0]);
    out.tail(n - k) = y.head(n - k);
    return out;
}

Vec shift_series(const Eigen::Ref<const Vec>& y, const DelaySpec& spec) {
    return shift_frames(y, spec.frames());
}

namespace {

std::vector<double> candidate_delays(double d_max, double step) {
    if (d_max < 0.0) throw InputError("delay_scan: d_max must be nonnegative");
    if (step <= 0.0) {
        if (d_max == 0.0) return {0.0};
        throw InputError("delay_scan: step must be positive");
    }
    std::vector<double> ds;
    for (int i = 0;; ++i) {
        const double d = i * step;
        if (d > d_max * (1.0 + 1e-12) + 1e-12) break;
        ds.push_back(d);
    }
    return ds;
}

DelayCurve scan_impl(const std::vector<Vec>& predictions,
                     const std::vector<Vec>& gold, double d_max, double step,
                     double frame_period) {
    if (predictions.size() != gold.size() || predictions.empty())
        throw InputError("delay_scan: prediction/gold series count mismatch");
    Index total = 0;
    for (std::size_t s = 0; s < predictions.size(); ++s) {
        if (predictions[s].size() != gold[s].size())
            throw InputError("delay_scan: series length mismatch");
        total += predictions[s].size();
    }
    DelayCurve curve;
    curve.best_ccc = -2.0;
    Vec pooled_pred(total), pooled_gold(total);
    for (double d : candidate_delays(d_max, step)) {
        const DelaySpec spec{d, frame_period};
        Index at = 0;
        for (std::size_t s = 0; s < predictions.size(); ++s) {
            const Index n = predictions[s].size();
            pooled_pred.segment(at, n) = shift_series(predictions[s], spec);
            pooled_gold.segment(at, n) = gold[s];
            at += n;
        }
        const double score = ccc(pooled_pred, pooled_gold);
        curve.points.emplace_back(d, score);
        if (score > curve.best_ccc) {
            curve.best_ccc = score;
            curve.best_delay = d;
        }
    }
    return curve;
}

}  // namespace

DelayCurve delay_scan(const Eigen::Ref<const Vec>& predictions,
                      const Eigen::Ref<const Vec>& gold, double d_max,
                      double step, double frame_period_seconds) {
    return scan_impl({predictions}, {gold}, d_max, step, frame_period_seconds);
}

DelayCurve delay_scan_pooled(const std::vector<Vec>& predictions,
                             const std::vector<Vec>& gold, double d_max,
                             double step, double frame_period_seconds) {
    return scan_impl(predictions, gold, d_max, step, frame_period_seconds);
}

}  // namespace emofuse
