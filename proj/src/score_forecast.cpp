#include "scorecast/score_forecast.hpp"

#include <string>

#include "scorecast/errors.hpp"

namespace scorecast {

ForecastRun forecast(const Forecaster& f, const ScoreSeries& observed, int horizon) {
    const int w = f.window();
    if (horizon < 1) {
        throw DataError("forecast: horizon must be at least 1");
    }
    if (observed.dim() != f.dim()) {
        throw DataError("forecast: score dimension " + std::to_string(observed.dim()) +
                        " does not match model dimension " + std::to_string(f.dim()));
    }
    if (observed.length() < w) {
        throw DataError("forecast: need at least " + std::to_string(w) +
                        " observed scores, have " + std::to_string(observed.length()));
    }
    const Eigen::Index d = observed.dim();

    // Rolling window: starts as the last w observed scores; each step drops
    // the oldest row and appends the raw (unclamped) prediction.
    Eigen::MatrixXd window(w, d);
    window = observed.tail(w);

    Eigen::MatrixXd emitted(horizon, d);
    for (int k = 0; k < horizon; ++k) {
        const Eigen::VectorXd raw = f.predict_one(window);
        if (!raw.allFinite()) {
            throw NumericalError("forecast: non-finite prediction at step " +
                                 std::to_string(k + 1));
        }
        emitted.row(k) = raw.cwiseMax(0.0).transpose();
        if (w > 1) {
            // In-place shift is safe: row i reads row i+1, written after.
            for (int r = 0; r + 1 < w; ++r) {
                window.row(r) = window.row(r + 1);
            }
        }
        window.row(w - 1) = raw.transpose();
    }

    const TimeIndex anchor = observed.end_index();
    return ForecastRun{anchor,
                       ScoreSeries(anchor + 1, std::move(emitted), Provenance::ModelForecast)};
}

Eigen::VectorXd forecast_at_horizon(const Forecaster& f, const ScoreSeries& observed, int k) {
    const ForecastRun run = forecast(f, observed, k);
    return run.forecasts.values().row(run.forecasts.length() - 1).transpose();
}

std::vector<Eigen::MatrixXd> rollout_many(const Forecaster& f, const ScoreSeries& observed,
                                          const std::vector<TimeIndex>& anchors, int horizon) {
    const int w = f.window();
    if (horizon < 1) {
        throw DataError("rollout: horizon must be at least 1");
    }
    if (observed.dim() != f.dim()) {
        throw DataError("rollout: score dimension does not match model dimension");
    }
    const auto count = static_cast<Eigen::Index>(anchors.size());
    const Eigen::Index d = observed.dim();
    std::vector<Eigen::MatrixXd> result(static_cast<std::size_t>(horizon));
    if (count == 0) {
        for (auto& step : result) {
            step.resize(0, d);
        }
        return result;
    }

    // windows row-block i holds the current w-step window of anchor i.
    Eigen::MatrixXd windows(count * w, d);
    for (Eigen::Index i = 0; i < count; ++i) {
        const TimeIndex anchor = anchors[static_cast<std::size_t>(i)];
        const TimeIndex first = anchor - w + 1;
        if (first < observed.start_index() || anchor > observed.end_index()) {
            throw DataError("rollout: anchor " + std::to_string(anchor) +
                            " lacks a full window of observed scores");
        }
        const Eigen::Index offset = first - observed.start_index();
        windows.middleRows(i * w, w) = observed.values().middleRows(offset, w);
    }

    for (int k = 0; k < horizon; ++k) {
        const Eigen::MatrixXd raw = f.predict_many(windows, count);
        if (!raw.allFinite()) {
            throw NumericalError("rollout: non-finite prediction at step " +
                                 std::to_string(k + 1));
        }
        result[static_cast<std::size_t>(k)] = raw.cwiseMax(0.0);
        for (Eigen::Index i = 0; i < count; ++i) {
            auto block = windows.middleRows(i * w, w);
            for (int r = 0; r + 1 < w; ++r) {
                block.row(r) = block.row(r + 1);
            }
            block.row(w - 1) = raw.row(i);
        }
    }
    return result;
}

}  // namespace scorecast
