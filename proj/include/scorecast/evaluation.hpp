#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * ROC-AUC of `scores` against binary membership `is_positive`, computed as
 * the normalized Mann-Whitney U statistic with average ranks for ties:
 * P(score_pos > score_neg) + 1/2 P(tie). Throws DataError when either class
 * is empty (an undefined AUC is never silently reported as 0.5).
 */
double auc(const std::vector<double>& scores, const std::vector<bool>& is_positive);

/// One AUC measurement with its class sizes.
struct AucCell {
    double auc = 0.0;
    Eigen::Index n_pos = 0;
    Eigen::Index n_neg = 0;
};

/// Per-dimension window AUC; a cell is empty when a dimension has no
/// positives (or no negatives) in the evaluated range.
struct AucReport {
    std::vector<std::optional<AucCell>> per_dim;
};

/**
 * Whole-window protocol: AUC over every time step of `scores`, per
 * dimension, with positives at exactly the labeled indices (no tolerance
 * window). Labels outside the score range are ignored.
 */
AucReport evaluate_window(const ScoreSeries& scores, const LabelSet& labels);

/// Per-(dimension, horizon) AUC grid from the anchor sweep.
struct HorizonSweep {
    int max_horizon = 0;
    std::vector<TimeIndex> anchors;
    std::vector<std::vector<std::optional<AucCell>>> cells;  // [dim][k-1]

    const std::optional<AucCell>& cell(Eigen::Index dim, int k) const {
        return cells[static_cast<std::size_t>(dim)][static_cast<std::size_t>(k - 1)];
    }
};

/**
 * Horizon-sweep protocol: for every anchor time tau in
 * [test_start, test_end - max_horizon] and every horizon k, the forecast
 * made at tau for time tau+k is scored against whether tau+k is a labeled
 * injection. `forecast_for_anchor` must return a max_horizon x D matrix
 * whose row k-1 is the step-k forecast using information up to tau only.
 */
HorizonSweep horizon_sweep(
    const std::function<Eigen::MatrixXd(TimeIndex)>& forecast_for_anchor, Eigen::Index dim,
    const LabelSet& labels, TimeIndex test_start, TimeIndex test_end, int max_horizon);

/**
 * Standard sweep: anchors roll the fitted score model forward over
 * `observed` (which must cover every anchor's trailing window — in the
 * three-segment protocol this is the concatenated layer-1 scores of the
 * score-training and test segments).
 */
HorizonSweep horizon_sweep(const Forecaster& f, const ScoreSeries& observed,
                           const LabelSet& labels, TimeIndex test_start, TimeIndex test_end,
                           int max_horizon);

}  // namespace scorecast
