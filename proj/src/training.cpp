#include "scorecast/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scorecast/adam.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/lstm.hpp"
#include "scorecast/ridge.hpp"
#include "scorecast/rng.hpp"
#include "scorecast/scaled.hpp"

namespace scorecast {

namespace {

// Memory cap for one cached forward pass: full-batch epochs run as chunked
// gradient accumulation so the activation cache stays bounded while the
// per-step products remain large enough for efficient GEMMs.
constexpr Eigen::Index kChunk = 256;

void validate(const TrainConfig& config) {
    if (config.epochs < 1) {
        throw DataError("train: epochs must be positive");
    }
    if (config.batch_size < 0) {
        throw DataError("train: batch size must be positive (0 = automatic)");
    }
    if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
        throw DataError("train: learning rate must be positive and finite");
    }
    if (config.clip_norm < 0.0 || !std::isfinite(config.clip_norm)) {
        throw DataError("train: gradient clip norm must be nonnegative and finite");
    }
}

// Rescales `grad` onto the ball of radius `limit` (no-op when disabled or
// already inside). Keeps rare huge-residual batches from derailing training.
void clip_gradient(Eigen::VectorXd& grad, double limit) {
    if (limit <= 0.0) {
        return;
    }
    const double norm = grad.norm();
    if (norm > limit) {
        grad *= limit / norm;
    }
}

// Gathers the windows named by indices[from, from+count) into per-step
// matrices (steps[t] row k = row t of window k) plus the matching targets.
void gather(const WindowedDataset& data, const std::vector<Eigen::Index>& indices,
            Eigen::Index from, Eigen::Index count, std::vector<Eigen::MatrixXd>& steps,
            Eigen::MatrixXd& targets) {
    const int w = data.window();
    const Eigen::Index d = data.dim();
    steps.assign(w, Eigen::MatrixXd(count, d));
    targets.resize(count, d);
    for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index i = indices[static_cast<std::size_t>(from + k)];
        const auto window = data.input(i);
        for (int t = 0; t < w; ++t) {
            steps[static_cast<std::size_t>(t)].row(k) = window.row(t);
        }
        targets.row(k) = data.target(i);
    }
}

TrainResult train_lstm(const ModelSpec& spec, const WindowedDataset& data,
                       const TrainConfig& config) {
    const Eigen::Index n = data.size();
    const Eigen::Index d = data.dim();
    auto net = std::make_unique<LstmNet>(d, spec.hidden, Window(data.window()));

    Rng init_rng = Rng::substream(config.seed, "init");
    net->init_params(init_rng);
    Rng batch_rng = Rng::substream(config.seed, "batch");

    Eigen::Index batch = config.batch_size > 0 ? config.batch_size : (n <= 2000 ? n : 64);
    batch = std::min(batch, n);
    const bool full_batch = batch == n;
    const double denom = static_cast<double>(n) * static_cast<double>(d);

    AdamConfig adam_config;
    adam_config.learning_rate = config.learning_rate;
    Adam optimizer(net->params().size(), adam_config);

    std::vector<Eigen::Index> indices(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), Eigen::Index{0});

    TrainResult result;
    result.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));

    std::vector<Eigen::MatrixXd> steps;
    Eigen::MatrixXd targets;
    LstmNet::Cache cache;
    Eigen::VectorXd grad(net->params().size());

    // Parameters of the best epoch seen so far; restored at the end so a
    // late bad step cannot ship a worse model than one already reached.
    double best_loss = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_params;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_sse_scaled = 0.0;  // sum of ||residual||^2 / (N*D)

        if (full_batch) {
            // One exact gradient-descent step per epoch, accumulated in
            // chunks; chunk order is fixed, so no randomness is consumed.
            grad.setZero();
            for (Eigen::Index at = 0; at < n; at += kChunk) {
                const Eigen::Index count = std::min(kChunk, n - at);
                gather(data, indices, at, count, steps, targets);
                Eigen::MatrixXd residual = net->forward_batch(steps, &cache) - targets;
                epoch_sse_scaled += residual.squaredNorm() / denom;
                residual *= 2.0 / denom;  // d(MSE)/d(prediction)
                grad += net->backward_batch(cache, residual);
            }
            clip_gradient(grad, config.clip_norm);
            optimizer.step(net->params(), grad);
        } else {
            batch_rng.shuffle(indices);
            for (Eigen::Index at = 0; at < n; at += batch) {
                const Eigen::Index count = std::min(batch, n - at);
                const double batch_denom = static_cast<double>(count) * static_cast<double>(d);
                gather(data, indices, at, count, steps, targets);
                Eigen::MatrixXd residual = net->forward_batch(steps, &cache) - targets;
                epoch_sse_scaled += residual.squaredNorm() / denom;
                residual *= 2.0 / batch_denom;
                grad = net->backward_batch(cache, residual);
                clip_gradient(grad, config.clip_norm);
                optimizer.step(net->params(), grad);
            }
        }

        if (!std::isfinite(epoch_sse_scaled)) {
            throw NumericalError("train: loss diverged at epoch " + std::to_string(epoch) +
                                 "; lower the learning rate");
        }
        result.epoch_loss.push_back(epoch_sse_scaled);
        if (epoch_sse_scaled < best_loss) {
            best_loss = epoch_sse_scaled;
            best_params = net->params();
        }
        if (config.stop_loss > 0.0 && epoch_sse_scaled <= config.stop_loss) {
            break;
        }
    }

    if (best_params.size() > 0) {
        net->params() = best_params;
    }
    result.model = std::move(net);
    return result;
}

}  // namespace

double dataset_mse(const Forecaster& model, const WindowedDataset& data) {
    const Eigen::Index n = data.size();
    const Eigen::Index d = data.dim();
    const int w = data.window();
    double sse = 0.0;
    constexpr Eigen::Index kBlock = 2048;
    Eigen::MatrixXd stacked;
    for (Eigen::Index at = 0; at < n; at += kBlock) {
        const Eigen::Index count = std::min(kBlock, n - at);
        stacked.resize(count * w, d);
        for (Eigen::Index k = 0; k < count; ++k) {
            stacked.middleRows(k * w, w) = data.input(at + k);
        }
        const Eigen::MatrixXd pred = model.predict_many(stacked, count);
        for (Eigen::Index k = 0; k < count; ++k) {
            sse += (pred.row(k) - data.target(at + k)).squaredNorm();
        }
    }
    return sse / (static_cast<double>(n) * static_cast<double>(d));
}

TrainResult train_forecaster(const ModelSpec& spec, const TimeSeries& series, Window window,
                             const TrainConfig& config) {
    validate(config);
    if (series.length() <= window.size) {
        throw DataError("train: series of length " + std::to_string(series.length()) +
                        " is too short for window " + std::to_string(window.size));
    }
    const WindowedDataset data = sliding_windows(series, window);

    TrainResult result;
    if (spec.kind == "ridge") {
        auto model = std::make_unique<RidgeAr>(series.dim(), window, spec.lambda);
        model->fit(data);
        result.model = std::move(model);
    } else if (spec.kind == "lstm") {
        if (spec.hidden < 1) {
            throw DataError("train: LSTM hidden size must be positive");
        }
        result = train_lstm(spec, data, config);
    } else {
        throw DataError("train: unknown model kind '" + spec.kind + "' (expected lstm or ridge)");
    }
    result.final_mse = dataset_mse(*result.model, data);
    if (!std::isfinite(result.final_mse)) {
        throw NumericalError("train: final model produces non-finite predictions");
    }
    return result;
}

TrainResult train_scaled_forecaster(const ModelSpec& spec, const TimeSeries& series,
                                    Window window, const TrainConfig& config) {
    auto [normalized, stats] = zscore_normalize(series);
    TrainResult result = train_forecaster(spec, normalized, window, config);
    result.model = std::make_unique<ScaledForecaster>(std::move(result.model), std::move(stats));
    return result;
}

}  // namespace scorecast
