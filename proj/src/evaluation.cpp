#include "scorecast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scorecast/errors.hpp"
#include "scorecast/score_forecast.hpp"

namespace scorecast {

double auc(const std::vector<double>& scores, const std::vector<bool>& is_positive) {
    const std::size_t n = scores.size();
    if (is_positive.size() != n) {
        throw DataError("auc: scores and labels differ in length");
    }
    std::size_t n_pos = 0;
    for (const bool p : is_positive) {
        n_pos += p ? 1 : 0;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("auc: undefined, needs at least one positive and one negative");
    }
    for (const double s : scores) {
        if (!std::isfinite(s)) {
            throw DataError("auc: scores must be finite");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of positive ranks, with tied scores sharing their average rank.
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (is_positive[order[k]]) {
                rank_sum += avg_rank;
            }
        }
        i = j;
    }
    const double u = rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

AucReport evaluate_window(const ScoreSeries& scores, const LabelSet& labels) {
    if (labels.dim() != scores.dim()) {
        throw DataError("evaluate: labels cover " + std::to_string(labels.dim()) +
                        " dimensions, scores have " + std::to_string(scores.dim()));
    }
    const Eigen::Index n = scores.length();
    AucReport report;
    report.per_dim.resize(static_cast<std::size_t>(scores.dim()));

    for (Eigen::Index j = 0; j < scores.dim(); ++j) {
        std::vector<double> values(static_cast<std::size_t>(n));
        std::vector<bool> positive(static_cast<std::size_t>(n), false);
        Eigen::Index n_pos = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            values[static_cast<std::size_t>(i)] = scores.values()(i, j);
            if (labels.contains(j, scores.start_index() + i)) {
                positive[static_cast<std::size_t>(i)] = true;
                ++n_pos;
            }
        }
        if (n_pos == 0 || n_pos == n) {
            continue;  // undefined for this dimension; cell stays empty
        }
        AucCell cell;
        cell.auc = auc(values, positive);
        cell.n_pos = n_pos;
        cell.n_neg = n - n_pos;
        report.per_dim[static_cast<std::size_t>(j)] = cell;
    }
    return report;
}

HorizonSweep horizon_sweep(
    const std::function<Eigen::MatrixXd(TimeIndex)>& forecast_for_anchor, Eigen::Index dim,
    const LabelSet& labels, TimeIndex test_start, TimeIndex test_end, int max_horizon) {
    if (max_horizon < 1) {
        throw DataError("sweep: max horizon must be at least 1");
    }
    if (labels.dim() != dim) {
        throw DataError("sweep: label dimensions do not match score dimensions");
    }
    HorizonSweep sweep;
    sweep.max_horizon = max_horizon;
    for (TimeIndex tau = test_start; tau + max_horizon <= test_end; ++tau) {
        sweep.anchors.push_back(tau);
    }
    if (sweep.anchors.empty()) {
        throw DataError("sweep: test range [" + std::to_string(test_start) + ", " +
                        std::to_string(test_end) + "] is shorter than the horizon");
    }

    const auto n_anchors = static_cast<Eigen::Index>(sweep.anchors.size());
    // forecasts[k-1](a, j) = step-k forecast of dimension j from anchor a.
    std::vector<Eigen::MatrixXd> forecasts(static_cast<std::size_t>(max_horizon),
                                           Eigen::MatrixXd(n_anchors, dim));
    for (Eigen::Index a = 0; a < n_anchors; ++a) {
        const Eigen::MatrixXd run = forecast_for_anchor(sweep.anchors[static_cast<std::size_t>(a)]);
        if (run.rows() != max_horizon || run.cols() != dim) {
            throw DataError("sweep: forecast block has wrong shape");
        }
        for (int k = 1; k <= max_horizon; ++k) {
            forecasts[static_cast<std::size_t>(k - 1)].row(a) = run.row(k - 1);
        }
    }

    sweep.cells.assign(static_cast<std::size_t>(dim),
                       std::vector<std::optional<AucCell>>(static_cast<std::size_t>(max_horizon)));
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (int k = 1; k <= max_horizon; ++k) {
            std::vector<double> values(static_cast<std::size_t>(n_anchors));
            std::vector<bool> positive(static_cast<std::size_t>(n_anchors), false);
            Eigen::Index n_pos = 0;
            for (Eigen::Index a = 0; a < n_anchors; ++a) {
                values[static_cast<std::size_t>(a)] =
                    forecasts[static_cast<std::size_t>(k - 1)](a, j);
                const TimeIndex target = sweep.anchors[static_cast<std::size_t>(a)] + k;
                if (labels.contains(j, target)) {
                    positive[static_cast<std::size_t>(a)] = true;
                    ++n_pos;
                }
            }
            if (n_pos == 0 || n_pos == n_anchors) {
                continue;  // reported as missing, never interpolated
            }
            AucCell cell;
            cell.auc = auc(values, positive);
            cell.n_pos = n_pos;
            cell.n_neg = n_anchors - n_pos;
            sweep.cells[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] = cell;
        }
    }
    return sweep;
}

HorizonSweep horizon_sweep(const Forecaster& f, const ScoreSeries& observed,
                           const LabelSet& labels, TimeIndex test_start, TimeIndex test_end,
                           int max_horizon) {
    if (max_horizon < 1) {
        throw DataError("sweep: max horizon must be at least 1");
    }
    // All anchors advance in lockstep through one batched rollout, then the
    // generic sweep just reads the precomputed rows back out.
    std::vector<TimeIndex> anchors;
    for (TimeIndex tau = test_start; tau + max_horizon <= test_end; ++tau) {
        anchors.push_back(tau);
    }
    const std::vector<Eigen::MatrixXd> steps = rollout_many(f, observed, anchors, max_horizon);

    const auto forecast_for_anchor = [&](TimeIndex tau) {
        const auto a = static_cast<Eigen::Index>(tau - test_start);
        Eigen::MatrixXd block(max_horizon, f.dim());
        for (int k = 0; k < max_horizon; ++k) {
            block.row(k) = steps[static_cast<std::size_t>(k)].row(a);
        }
        return block;
    };
    return horizon_sweep(forecast_for_anchor, observed.dim(), labels, test_start, test_end,
                         max_horizon);
}

}  // namespace scorecast
