#include "scorecast/series.hpp"

#include <algorithm>
#include <cmath>

#include "scorecast/errors.hpp"

namespace scorecast {

namespace {

void require_finite(const Eigen::MatrixXd& values, const char* what) {
    if (!values.allFinite()) {
        throw DataError(std::string(what) + ": contains NaN or infinite values");
    }
}

}  // namespace

TimeSeries::TimeSeries(TimeIndex start_index, Eigen::MatrixXd values)
    : start_(start_index), values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw DataError("TimeSeries: empty values");
    }
    require_finite(values_, "TimeSeries");
}

double TimeSeries::at(TimeIndex t, Eigen::Index j) const {
    if (t < start_ || t > end_index() || j < 0 || j >= dim()) {
        throw DataError("TimeSeries::at: index out of range");
    }
    return values_(static_cast<Eigen::Index>(t - start_), j);
}

TimeSeries TimeSeries::slice(TimeIndex from, TimeIndex to) const {
    if (from < start_ || to > end_index() || from > to) {
        throw DataError("TimeSeries::slice: range [" + std::to_string(from) + ", " +
                        std::to_string(to) + "] outside series");
    }
    const auto offset = static_cast<Eigen::Index>(from - start_);
    const auto count = static_cast<Eigen::Index>(to - from + 1);
    return TimeSeries(from, values_.middleRows(offset, count));
}

Eigen::Block<const Eigen::MatrixXd> TimeSeries::tail(Eigen::Index count) const {
    if (count < 1 || count > length()) {
        throw DataError("TimeSeries::tail: invalid count");
    }
    return values_.bottomRows(count);
}

ScoreSeries::ScoreSeries(TimeIndex start_index, Eigen::MatrixXd values,
                         std::vector<Provenance> provenance)
    : start_(start_index), values_(std::move(values)), provenance_(std::move(provenance)) {
    validate();
}

ScoreSeries::ScoreSeries(TimeIndex start_index, Eigen::MatrixXd values, Provenance provenance)
    : start_(start_index), values_(std::move(values)) {
    provenance_.assign(static_cast<std::size_t>(values_.rows()), provenance);
    validate();
}

void ScoreSeries::validate() const {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw DataError("ScoreSeries: empty values");
    }
    require_finite(values_, "ScoreSeries");
    if (static_cast<Eigen::Index>(provenance_.size()) != values_.rows()) {
        throw DataError("ScoreSeries: provenance length mismatch");
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        if (provenance_[static_cast<std::size_t>(i)] == Provenance::ObservedResidual &&
            (values_.row(i).array() < 0.0).any()) {
            throw DataError("ScoreSeries: observed residual scores must be nonnegative");
        }
    }
}

double ScoreSeries::at(TimeIndex t, Eigen::Index j) const {
    if (t < start_ || t > end_index() || j < 0 || j >= dim()) {
        throw DataError("ScoreSeries::at: index out of range");
    }
    return values_(static_cast<Eigen::Index>(t - start_), j);
}

ScoreSeries ScoreSeries::slice(TimeIndex from, TimeIndex to) const {
    if (from < start_ || to > end_index() || from > to) {
        throw DataError("ScoreSeries::slice: range outside series");
    }
    const auto offset = static_cast<Eigen::Index>(from - start_);
    const auto count = static_cast<Eigen::Index>(to - from + 1);
    std::vector<Provenance> prov(provenance_.begin() + offset,
                                 provenance_.begin() + offset + count);
    return ScoreSeries(from, values_.middleRows(offset, count), std::move(prov));
}

ScoreSeries ScoreSeries::concat(const ScoreSeries& next) const {
    if (next.start_index() != end_index() + 1) {
        throw DataError("ScoreSeries::concat: series are not adjacent");
    }
    if (next.dim() != dim()) {
        throw DataError("ScoreSeries::concat: dimension mismatch");
    }
    Eigen::MatrixXd merged(length() + next.length(), dim());
    merged.topRows(length()) = values_;
    merged.bottomRows(next.length()) = next.values();
    std::vector<Provenance> prov = provenance_;
    prov.insert(prov.end(), next.provenance().begin(), next.provenance().end());
    return ScoreSeries(start_, std::move(merged), std::move(prov));
}

Eigen::Block<const Eigen::MatrixXd> ScoreSeries::tail(Eigen::Index count) const {
    if (count < 1 || count > length()) {
        throw DataError("ScoreSeries::tail: invalid count");
    }
    return values_.bottomRows(count);
}

LabelSet::LabelSet(Eigen::Index dim) : by_dim_(static_cast<std::size_t>(dim)) {
    if (dim < 1) throw DataError("LabelSet: dim must be >= 1");
}

LabelSet::LabelSet(Eigen::Index dim,
                   const std::vector<std::pair<Eigen::Index, TimeIndex>>& entries)
    : LabelSet(dim) {
    for (const auto& [j, t] : entries) add(j, t);
}

const std::vector<TimeIndex>& LabelSet::indices(Eigen::Index j) const {
    if (j < 0 || j >= dim()) throw DataError("LabelSet: dimension out of range");
    return by_dim_[static_cast<std::size_t>(j)];
}

bool LabelSet::contains(Eigen::Index j, TimeIndex t) const {
    const auto& v = indices(j);
    return std::binary_search(v.begin(), v.end(), t);
}

std::size_t LabelSet::total() const {
    std::size_t n = 0;
    for (const auto& v : by_dim_) n += v.size();
    return n;
}

void LabelSet::add(Eigen::Index j, TimeIndex t) {
    if (j < 0 || j >= dim()) throw DataError("LabelSet: dimension out of range");
    auto& v = by_dim_[static_cast<std::size_t>(j)];
    const auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end() || *it != t) v.insert(it, t);
}

void LabelSet::validate_range(TimeIndex lo, TimeIndex hi) const {
    for (Eigen::Index j = 0; j < dim(); ++j) {
        for (TimeIndex t : indices(j)) {
            if (t < lo || t > hi) {
                throw DataError("LabelSet: label at t=" + std::to_string(t) +
                                " outside series range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
            }
        }
    }
}

Window::Window(int s) : size(s) {
    if (s < 1) throw DataError("Window: size must be >= 1");
}

NormStats compute_norm_stats(const TimeSeries& series) {
    const auto& v = series.values();
    const auto n = static_cast<double>(v.rows());
    NormStats stats;
    stats.mean = v.colwise().mean();
    stats.std.resize(v.cols());
    stats.scale.resize(v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double var = (v.col(j).array() - stats.mean(j)).square().sum() / n;
        double sd = std::sqrt(var);
        // Constant dimensions: rounding can leave a vanishing but nonzero
        // variance; scaling by it would blow the noise up to O(1).
        if (sd <= 1e-12 * std::max(1.0, std::abs(stats.mean(j)))) sd = 0.0;
        stats.std(j) = sd;
        stats.scale(j) = sd == 0.0 ? 1.0 : sd;
    }
    return stats;
}

TimeSeries apply_normalization(const TimeSeries& series, const NormStats& stats) {
    if (stats.dim() != series.dim()) {
        throw DataError("apply_normalization: dimension mismatch");
    }
    Eigen::MatrixXd out =
        (series.values().rowwise() - stats.mean.transpose()).array().rowwise() /
        stats.scale.transpose().array();
    return TimeSeries(series.start_index(), std::move(out));
}

TimeSeries invert_normalization(const TimeSeries& series, const NormStats& stats) {
    if (stats.dim() != series.dim()) {
        throw DataError("invert_normalization: dimension mismatch");
    }
    Eigen::MatrixXd out =
        (series.values().array().rowwise() * stats.scale.transpose().array()).rowwise() +
        stats.mean.transpose().array();
    return TimeSeries(series.start_index(), std::move(out));
}

std::pair<TimeSeries, NormStats> zscore_normalize(const TimeSeries& series) {
    NormStats stats = compute_norm_stats(series);
    return {apply_normalization(series, stats), std::move(stats)};
}

WindowedDataset::WindowedDataset(Eigen::MatrixXd values, Window w)
    : values_(std::move(values)), window_(w.size) {
    if (values_.rows() <= window_) {
        throw DataError("WindowedDataset: need more than window=" +
                        std::to_string(window_) + " rows, got " +
                        std::to_string(values_.rows()));
    }
}

Eigen::Block<const Eigen::MatrixXd> WindowedDataset::input(Eigen::Index i) const {
    return values_.middleRows(i, window_);
}

Eigen::MatrixXd::ConstRowXpr WindowedDataset::target(Eigen::Index i) const {
    return values_.row(i + window_);
}

WindowedDataset sliding_windows(const TimeSeries& series, Window w) {
    return WindowedDataset(series.values(), w);
}

}  // namespace scorecast
