#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/// Which forecaster to build, with its model-specific knobs.
struct ModelSpec {
    std::string kind = "lstm";  // "lstm" or "ridge"
    int hidden = 64;            // LSTM hidden size
    double lambda = 1e-4;       // ridge penalty
};

/**
 * Gradient-training hyperparameters (LSTM only; the ridge fit is closed
 * form and ignores everything but the data). The seed fully determines
 * initialization and batch order, so identical configs on identical data
 * produce bit-identical parameters.
 */
struct TrainConfig {
    int epochs = 200;
    int batch_size = 0;  // 0 = full batch up to 2000 pairs, else 64
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    double stop_loss = 0.0;  // stop early once epoch MSE falls below; 0 disables
    double clip_norm = 0.0;  // rescale gradients above this global norm; 0 disables
};

struct TrainResult {
    std::unique_ptr<Forecaster> model;
    double final_mse = 0.0;          // full-pass MSE of the trained model
    std::vector<double> epoch_loss;  // per-epoch mean training loss (LSTM)
};

/// Mean squared one-step error of `model` over every pair in `data`.
double dataset_mse(const Forecaster& model, const WindowedDataset& data);

/// Fits a one-step-ahead forecaster to all sliding windows of `series`.
TrainResult train_forecaster(const ModelSpec& spec, const TimeSeries& series, Window window,
                             const TrainConfig& config);

/// Normalizes `series` per dimension, fits on the normalized values, and
/// returns the model wrapped so it predicts in the original units. Used for
/// score sequences, whose raw scale is too small to train on directly.
/// `final_mse` is reported in normalized units.
TrainResult train_scaled_forecaster(const ModelSpec& spec, const TimeSeries& series,
                                    Window window, const TrainConfig& config);

}  // namespace scorecast
