#pragma once

#include <vector>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Cuts a series into contiguous segments at cumulative lengths `cuts`
 * (e.g. {500, 1000} on a 1500-point series gives three 500-point segments).
 * An empty cut list splits once at floor(T/2).
 */
std::vector<TimeSeries> split_series(const TimeSeries& series,
                                     const std::vector<Eigen::Index>& cuts);

/**
 * Applies a fitted forecaster over `segment` with teacher forcing: the
 * prediction for time t uses the w actual observations before t, never a
 * model output. `context` supplies the w rows immediately preceding the
 * segment (the tail of the previous segment), so every point of `segment`
 * receives a score. Scores are |observation - prediction| per dimension.
 */
ScoreSeries score_segment(const Forecaster& g, const TimeSeries& segment,
                          const Eigen::Ref<const Eigen::MatrixXd>& context);

}  // namespace scorecast
