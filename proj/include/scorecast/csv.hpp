#pragma once

#include <string>
#include <vector>

#include "scorecast/evaluation.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/// Doubles in CSV artifacts are written with enough digits (%.17g) to
/// round-trip exactly.
std::string format_double(double value);

/// Strict numeric parsing; the whole token must be consumed.
double parse_double(const std::string& token, const std::string& context);
std::int64_t parse_int(const std::string& token, const std::string& context);

/// Splits one CSV line on commas (no quoting; none of our formats needs it).
std::vector<std::string> split_csv(const std::string& line);

/// `t,x1,...,xD`
void write_series_csv(const std::string& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::string& path);

/// `dim,t` with 1-based dimensions, sorted by dimension then time.
void write_labels_csv(const std::string& path, const LabelSet& labels);
/// `min_dim` pads the result when trailing dimensions have no labels.
LabelSet read_labels_csv(const std::string& path, Eigen::Index min_dim = 0);

/// `t,a1,...,aD` (observed scores only, no provenance column).
void write_scores_csv(const std::string& path, const ScoreSeries& scores);
ScoreSeries read_scores_csv(const std::string& path);

/// `t,provenance,a1,...,aD` with provenance `obs` (observed residual) or
/// `pred` (model forecast); the usual content is layer-1 scores followed by
/// the recursive forecast.
void write_forecast_csv(const std::string& path, const ScoreSeries& scores);
ScoreSeries read_forecast_csv(const std::string& path);

/// `dim,k,auc,n_pos,n_neg` with 1-based dimensions. Whole-window reports use
/// k = 0; sweep rows use the actual horizon. Undefined cells are skipped.
void write_auc_csv(const std::string& path, const AucReport& report);
void write_auc_csv(const std::string& path, const HorizonSweep& sweep);

/// Aligned text rendering for terminal output.
std::string render_auc_table(const AucReport& report);
std::string render_auc_table(const HorizonSweep& sweep);

}  // namespace scorecast
