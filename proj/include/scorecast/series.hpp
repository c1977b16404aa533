#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace scorecast {

using TimeIndex = std::int64_t;

/**
 * Ordered D-dimensional real observations on a uniform integer time grid.
 *
 * Element i lives at time start_index + i. Values are validated to be finite
 * at construction and the object is immutable afterwards, so instances are
 * safe to share across threads.
 */
class TimeSeries {
public:
    /// rows = time steps, cols = dimensions. Throws DataError on empty or
    /// non-finite input.
    TimeSeries(TimeIndex start_index, Eigen::MatrixXd values);

    TimeIndex start_index() const { return start_; }
    TimeIndex end_index() const { return start_ + length() - 1; }
    Eigen::Index length() const { return values_.rows(); }
    Eigen::Index dim() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }

    /// Value at global time t, dimension j (0-based).
    double at(TimeIndex t, Eigen::Index j) const;

    /// Contiguous sub-series covering global times [from, to], inclusive.
    TimeSeries slice(TimeIndex from, TimeIndex to) const;

    /// Last `count` rows, as a view.
    Eigen::Block<const Eigen::MatrixXd> tail(Eigen::Index count) const;

private:
    TimeIndex start_;
    Eigen::MatrixXd values_;
};

enum class Provenance : std::uint8_t { ObservedResidual, ModelForecast };

/**
 * Per-dimension outlier scores on a time grid, with per-step provenance.
 * Observed-residual entries are absolute residuals and must be >= 0;
 * model-forecast entries carry whatever the score model emitted.
 */
class ScoreSeries {
public:
    ScoreSeries(TimeIndex start_index, Eigen::MatrixXd values,
                std::vector<Provenance> provenance);

    /// Convenience: every element gets the same provenance.
    ScoreSeries(TimeIndex start_index, Eigen::MatrixXd values, Provenance provenance);

    TimeIndex start_index() const { return start_; }
    TimeIndex end_index() const { return start_ + length() - 1; }
    Eigen::Index length() const { return values_.rows(); }
    Eigen::Index dim() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<Provenance>& provenance() const { return provenance_; }

    double at(TimeIndex t, Eigen::Index j) const;

    /// Scores for global times [from, to], inclusive.
    ScoreSeries slice(TimeIndex from, TimeIndex to) const;

    /// This series followed immediately by `next` (indices must be adjacent).
    ScoreSeries concat(const ScoreSeries& next) const;

    Eigen::Block<const Eigen::MatrixXd> tail(Eigen::Index count) const;

private:
    void validate() const;

    TimeIndex start_;
    Eigen::MatrixXd values_;
    std::vector<Provenance> provenance_;
};

/**
 * Ground-truth injected-outlier positions, one sorted index list per
 * dimension.
 */
class LabelSet {
public:
    explicit LabelSet(Eigen::Index dim);

    /// Builds from (dim, t) pairs; dims are 0-based here.
    LabelSet(Eigen::Index dim, const std::vector<std::pair<Eigen::Index, TimeIndex>>& entries);

    Eigen::Index dim() const { return static_cast<Eigen::Index>(by_dim_.size()); }
    const std::vector<TimeIndex>& indices(Eigen::Index j) const;
    bool contains(Eigen::Index j, TimeIndex t) const;
    std::size_t total() const;

    void add(Eigen::Index j, TimeIndex t);

    /// Throws DataError if any label falls outside [lo, hi].
    void validate_range(TimeIndex lo, TimeIndex hi) const;

private:
    std::vector<std::vector<TimeIndex>> by_dim_;
};

/// Number of past steps a windowed predictor sees.
struct Window {
    int size = 1;
    explicit Window(int s);
};

/// Per-dimension normalization statistics (population std). Dimensions whose
/// std is (numerically) zero are flagged and only shifted, never scaled.
struct NormStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;    // population std as computed; 0 for constant dims
    Eigen::VectorXd scale;  // divisor actually applied: std, or 1 where std == 0

    Eigen::Index dim() const { return mean.size(); }
};

/// Statistics of `series` alone; does not transform anything.
NormStats compute_norm_stats(const TimeSeries& series);

TimeSeries apply_normalization(const TimeSeries& series, const NormStats& stats);
TimeSeries invert_normalization(const TimeSeries& series, const NormStats& stats);

/// Normalizes each dimension to mean 0 / std 1 using the series' own
/// statistics. Constant dimensions map to 0.
std::pair<TimeSeries, NormStats> zscore_normalize(const TimeSeries& series);

/**
 * One-step-ahead supervised pairs over a series: pair i has input
 * rows [i, i+w) and target row i+w. Holds its own copy of the values so the
 * pairs stay valid independently of the source series.
 */
class WindowedDataset {
public:
    /// Throws DataError unless values has at least w+1 rows.
    WindowedDataset(Eigen::MatrixXd values, Window w);

    Eigen::Index size() const { return values_.rows() - window_; }
    int window() const { return window_; }
    Eigen::Index dim() const { return values_.cols(); }
    const Eigen::MatrixXd& source() const { return values_; }

    Eigen::Block<const Eigen::MatrixXd> input(Eigen::Index i) const;
    Eigen::MatrixXd::ConstRowXpr target(Eigen::Index i) const;

private:
    Eigen::MatrixXd values_;
    int window_;
};

WindowedDataset sliding_windows(const TimeSeries& series, Window w);

}  // namespace scorecast
