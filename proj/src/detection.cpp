#include "scorecast/detection.hpp"

#include <algorithm>
#include <string>

#include "scorecast/errors.hpp"

namespace scorecast {

std::vector<TimeSeries> split_series(const TimeSeries& series,
                                     const std::vector<Eigen::Index>& cuts) {
    const Eigen::Index length = series.length();
    std::vector<Eigen::Index> bounds = cuts;
    if (bounds.empty()) {
        bounds.push_back(length / 2);
    }
    Eigen::Index previous = 0;
    for (const Eigen::Index cut : bounds) {
        if (cut <= previous || cut >= length) {
            throw DataError("split: cut points must be strictly increasing and inside the "
                            "series; got cut at " +
                            std::to_string(cut) + " for length " + std::to_string(length));
        }
        previous = cut;
    }
    bounds.push_back(length);

    std::vector<TimeSeries> segments;
    segments.reserve(bounds.size());
    Eigen::Index begin = 0;
    for (const Eigen::Index end : bounds) {
        const TimeIndex from = series.start_index() + begin;
        const TimeIndex to = series.start_index() + end - 1;
        segments.push_back(series.slice(from, to));
        begin = end;
    }
    return segments;
}

ScoreSeries score_segment(const Forecaster& g, const TimeSeries& segment,
                          const Eigen::Ref<const Eigen::MatrixXd>& context) {
    const int w = g.window();
    if (segment.dim() != g.dim()) {
        throw DataError("score: segment has " + std::to_string(segment.dim()) +
                        " dimensions, model expects " + std::to_string(g.dim()));
    }
    if (context.rows() != w || context.cols() != segment.dim()) {
        throw DataError("score: context must be the " + std::to_string(w) +
                        " observations preceding the segment");
    }

    const Eigen::Index n = segment.length();
    const Eigen::Index d = segment.dim();
    Eigen::MatrixXd combined(w + n, d);
    combined.topRows(w) = context;
    combined.bottomRows(n) = segment.values();

    // Predictions for all segment points in blocks of batched windows.
    Eigen::MatrixXd scores(n, d);
    constexpr Eigen::Index kBlock = 2048;
    Eigen::MatrixXd stacked;
    for (Eigen::Index at = 0; at < n; at += kBlock) {
        const Eigen::Index count = std::min(kBlock, n - at);
        stacked.resize(count * w, d);
        for (Eigen::Index k = 0; k < count; ++k) {
            stacked.middleRows(k * w, w) = combined.middleRows(at + k, w);
        }
        const Eigen::MatrixXd pred = g.predict_many(stacked, count);
        scores.middleRows(at, count) =
            (segment.values().middleRows(at, count) - pred).cwiseAbs();
    }
    return ScoreSeries(segment.start_index(), std::move(scores), Provenance::ObservedResidual);
}

}  // namespace scorecast
