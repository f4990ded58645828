#pragma once

#include <utility>
#include <vector>

#include "emofuse/common.hpp"

namespace emofuse {

// Delay between a prediction trace and the gold standard, in seconds,
// discretized to whole frames.
struct DelaySpec {
    double delay_seconds = 0.0;
    double frame_period_seconds = 0.1;

    Index frames() const;
};

// Shift a series later in time by k frames, padding the leading edge with
// the first value. Output length equals input length.
Vec shift_frames(const Eigen::Ref<const Vec>& y, Index k);
Vec shift_series(const Eigen::Ref<const Vec>& y, const DelaySpec& spec);

struct DelayCurve {
    std::vector<std::pair<double, double>> points;  // (delay_s, ccc)
    double best_delay = 0.0;
    double best_ccc = 0.0;
};

// CCC of shift(predictions, d) against gold for d in {0, step, ..., d_max}.
// Ties break toward the smaller delay.
DelayCurve delay_scan(const Eigen::Ref<const Vec>& predictions,
                      const Eigen::Ref<const Vec>& gold, double d_max,
                      double step, double frame_period_seconds);

// Same scan over several prediction/gold pairs (e.g. one per subject):
// each series is shifted on its own, then the CCC is pooled over the
// concatenation.
DelayCurve delay_scan_pooled(const std::vector<Vec>& predictions,
                             const std::vector<Vec>& gold, double d_max,
                             double step, double frame_period_seconds);

}  // namespace emofuse
