#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Additive Gaussian perturbation N(mean, sd) applied at injection points
 * (sd is the standard deviation, not the variance). With `relative_to_std`
 * both parameters are multiplied by the perturbed column's own standard
 * deviation over the full clean series; with `random_mean_sign` the sign of
 * the mean flips with probability 1/2 per injection event.
 */
struct NoiseSpec {
    double mean = 0.0;
    double sd = 0.5;
    bool relative_to_std = false;
    bool random_mean_sign = false;
};

/// A synthetic benchmark: the perturbed series, its clean source, and the
/// ground-truth injection positions. Regeneration from the same inputs is
/// bit-identical.
struct GeneratedDataset {
    TimeSeries series;
    TimeSeries clean;
    LabelSet labels;
    std::uint64_t seed = 0;
};

/// Univariate sin(t/scale) sampled at integer times t = start, start+1, ...
TimeSeries gen_sine(Eigen::Index length, double scale = 10.0, TimeIndex start = 1);

/// Bivariate (sin(t/10), cos(t/10)); the two dimensions satisfy
/// x1^2 + x2^2 = 1 at every t.
TimeSeries gen_sincos(Eigen::Index length, TimeIndex start = 1);

/**
 * Perturbs every dimension at global times that are positive multiples of
 * `period` (a series over 1..1500 with period 50 is hit at 50, 100, ...,
 * 1500). Labels record exactly the perturbed (dimension, time) pairs.
 */
GeneratedDataset inject_periodic(const TimeSeries& clean, int period, const NoiseSpec& noise,
                                 std::uint64_t seed);

/**
 * Draws `count` source times uniformly without replacement from the times
 * where both the source and the lagged target stay in range, keeping
 * selected times at least lag+1 apart so cause/effect pairs never overlap.
 * Each selected time gets a perturbation on `source_dim`, and `target_dim`
 * gets its own draw `lag` steps later. Dimensions are 0-based.
 */
GeneratedDataset inject_delayed_pair(const TimeSeries& clean, Eigen::Index count, int lag,
                                     Eigen::Index source_dim, Eigen::Index target_dim,
                                     const NoiseSpec& noise, std::uint64_t seed);

/// Result of loading a CSV with missing-value rows removed.
struct LoadedCsv {
    TimeSeries series;
    Eigen::Index dropped_rows = 0;  // rows removed for missing values
};

/**
 * Loads the named columns from a CSV file with a header row. Rows with a
 * missing value (empty or "NA") in any selected column are dropped and
 * counted. After dropping, `offset` rows are skipped and at most `limit`
 * rows are kept (limit < 0 means all); the result is re-indexed
 * contiguously from t = 1.
 */
LoadedCsv load_csv_columns(const std::string& path, const std::vector<std::string>& columns,
                           Eigen::Index offset = 0, Eigen::Index limit = -1);

}  // namespace scorecast
