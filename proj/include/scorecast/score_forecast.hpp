#pragma once

#include <vector>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Result of one recursive score rollout. Forecasts start immediately after
 * the anchor (the last observed time) and each step feeds the previous
 * predictions back into the model as if they had been observed.
 */
struct ForecastRun {
    TimeIndex anchor_index = 0;
    ScoreSeries forecasts;  // provenance = ModelForecast, starts at anchor + 1
};

/**
 * Rolls the score model forward `horizon` steps from the end of
 * `observed`. Emitted forecasts are clamped at 0 (scores are nonnegative by
 * construction) but the raw, unclamped prediction is what re-enters the
 * window, preserving the model's internal dynamics.
 */
ForecastRun forecast(const Forecaster& f, const ScoreSeries& observed, int horizon);

/// Step k of the rollout only (k >= 1), as used by the horizon sweep.
Eigen::VectorXd forecast_at_horizon(const Forecaster& f, const ScoreSeries& observed, int k);

/**
 * Independent rollouts from many anchors, advanced in lockstep so each of
 * the `horizon` steps is one batched model call. `anchors` are global time
 * indices into `observed`; every anchor needs at least f.window() observed
 * scores at or before it. Element [k-1] of the result holds the step-k
 * forecasts, one row per anchor (clamped, same as `forecast`).
 */
std::vector<Eigen::MatrixXd> rollout_many(const Forecaster& f, const ScoreSeries& observed,
                                          const std::vector<TimeIndex>& anchors, int horizon);

}  // namespace scorecast
