#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

inline constexpr int kCheckpointVersion = 1;

/**
 * Model checkpoints are plain text: a version header, the model body
 * (kind tag, hyperparameters, parameters), and an optional normalization
 * block for detectors that were trained in normalized space. Parameters are
 * written as C hexfloats, so save -> load round-trips bit-exactly.
 */
struct Checkpoint {
    std::unique_ptr<Forecaster> model;
    std::optional<NormStats> norm;
};

void write_checkpoint(std::ostream& out, const Forecaster& model,
                      const NormStats* norm = nullptr);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const Forecaster& model,
                     const NormStats* norm = nullptr);
Checkpoint load_checkpoint(const std::string& path);

/// Shared `norm` block format: "norm D" then mean/std/scale rows as hexfloats.
void write_norm_stats(std::ostream& out, const NormStats& norm);
NormStats read_norm_stats(std::istream& in);

}  // namespace scorecast
