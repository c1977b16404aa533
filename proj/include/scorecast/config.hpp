#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorecast/datagen.hpp"
#include "scorecast/training.hpp"

namespace scorecast {

/// Where the data comes from: a generator or a CSV file.
struct DatasetSpec {
    std::string kind = "sine";  // sine | sincos | csv
    Eigen::Index length = 0;    // generators only
    double scale = 10.0;        // sine only
    std::string path;           // csv only
    std::vector<std::string> columns;
    Eigen::Index offset = 0;  // csv: rows to skip after missing-value drop
    Eigen::Index limit = -1;  // csv: rows to keep (-1 = all)
};

/// Which outliers get injected, if any. Dimensions are 1-based here, as in
/// every user-facing surface.
struct InjectionSpec {
    std::string mode = "none";  // none | periodic | delayed-pair
    int period = 50;            // periodic
    Eigen::Index count = 0;     // delayed-pair; 0 means derive from rate
    double rate = 0.0;          // delayed-pair: fraction of series length
    int lag = 10;               // delayed-pair
    int source_dim = 2;         // delayed-pair
    int target_dim = 1;         // delayed-pair
    NoiseSpec noise;
};

/// One forecasting layer: model shape plus its training knobs.
struct LayerSpec {
    ModelSpec model;
    int window = 30;
    TrainConfig train;  // seed is filled in from the master seed at run time
};

struct EvaluationSpec {
    std::string protocol = "window";  // window | sweep
    int max_horizon = 14;             // sweep only
    Eigen::Index horizon = 0;         // window: 0 = length of the test segment
};

/**
 * Full declarative description of one experiment, read from a small
 * key-value config file (see configs/ for the documented schema). The
 * master seed deliberately lives outside the file - it is supplied per run
 * - so one config can drive many seeded replicates.
 */
struct ExperimentConfig {
    int version = 1;
    DatasetSpec dataset;
    InjectionSpec injection;
    std::vector<Eigen::Index> cuts;  // cumulative split points; empty = floor(T/2)
    LayerSpec detector;
    LayerSpec scorecaster;
    EvaluationSpec evaluation;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text, const std::string& origin);

    /// Deterministic rendering of every field, used for hashing.
    std::string canonical() const;
    std::uint64_t hash() const;
};

}  // namespace scorecast
