#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorecast/config.hpp"
#include "scorecast/datagen.hpp"
#include "scorecast/evaluation.hpp"

namespace scorecast {

/// Summary of one end-to-end experiment run, mirrored by the artifacts in
/// the output directory.
struct ExperimentReport {
    std::uint64_t master_seed = 0;
    std::uint64_t config_hash = 0;
    std::string out_dir;
    Eigen::Index dropped_rows = 0;
    std::vector<Eigen::Index> segment_lengths;
    double detector_mse = 0.0;
    double scorecaster_mse = 0.0;
    std::string protocol;     // "window" or "sweep"
    AucReport window_report;  // filled for the window protocol
    HorizonSweep sweep;       // filled for the sweep protocol
    std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
};

/**
 * Materializes the configured dataset: generates and injects (seeded from
 * the master seed's datagen substream) or loads the configured CSV. The
 * label set is empty when nothing is injected.
 */
GeneratedDataset build_dataset(const ExperimentConfig& config, std::uint64_t master_seed,
                               Eigen::Index* dropped_rows = nullptr);

/**
 * Runs the full three-segment protocol (two-segment degenerate form when
 * the config has a single cut): segment A trains the detector, segment B is
 * scored and trains the score model, segment C is forecast and evaluated.
 * Writes series/labels/scores/forecast/auc CSVs, model checkpoints, and a
 * manifest into `out_dir`. Identical config + seed reproduces every CSV
 * byte for byte.
 */
ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t master_seed,
                                const std::string& out_dir);

}  // namespace scorecast
