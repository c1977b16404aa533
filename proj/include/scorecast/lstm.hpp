#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "scorecast/forecaster.hpp"
#include "scorecast/rng.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Single-layer LSTM with a linear readout, applied statelessly per window:
 * the recurrence runs over the w input rows from zero initial state and the
 * readout maps the final hidden state to the next D-dimensional value.
 *
 * Parameters live in one flat vector (gate order i, f, g, o):
 *
 *   wx 4H x D | wh 4H x H | b 4H | wy D x H | by D
 *
 * which makes optimizer updates, gradient checks, and serialization operate
 * on a single contiguous buffer. Gradients come from exact backpropagation
 * through time over a cached forward pass.
 */
class LstmNet final : public Forecaster {
public:
    LstmNet(Eigen::Index dim, int hidden, Window window);

    /// 4H(D+H+1) + HD + D
    static Eigen::Index param_count(Eigen::Index dim, int hidden);

    /// Weights uniform on (-1/sqrt(H), 1/sqrt(H)), biases zero except the
    /// forget gate's, which starts at 1 to ease long-range credit flow.
    void init_params(Rng& rng);

    int window() const override { return window_; }
    Eigen::Index dim() const override { return dim_; }
    int hidden() const { return hidden_; }
    std::string kind() const override { return "lstm"; }

    Eigen::VectorXd& params() { return params_; }
    const Eigen::VectorXd& params() const { return params_; }

    Eigen::VectorXd predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const override;
    Eigen::MatrixXd predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                 Eigen::Index count) const override;

    void save(std::ostream& out) const override;

    /// Activations of one batched forward pass, kept for the backward pass.
    struct Cache {
        std::vector<Eigen::MatrixXd> x;                      // w of B x D
        std::vector<Eigen::MatrixXd> gi, gf, gg, go, c, tc, h;  // w of B x H
        Eigen::MatrixXd prediction;                          // B x D
        Eigen::Index batch = 0;
    };

    /// steps: w matrices of shape B x D (step t holds row t of every window).
    /// Returns the B x D predictions; fills `cache` when non-null.
    Eigen::MatrixXd forward_batch(const std::vector<Eigen::MatrixXd>& steps,
                                  Cache* cache) const;

    /// Gradient of a scalar loss w.r.t. all parameters, given dLoss/dPrediction.
    Eigen::VectorXd backward_batch(const Cache& cache,
                                   const Eigen::MatrixXd& d_prediction) const;

    // Views into the flat parameter vector.
    Eigen::Map<const Eigen::MatrixXd> wx() const;
    Eigen::Map<const Eigen::MatrixXd> wh() const;
    Eigen::Map<const Eigen::VectorXd> b() const;
    Eigen::Map<const Eigen::MatrixXd> wy() const;
    Eigen::Map<const Eigen::VectorXd> by() const;
    Eigen::Map<Eigen::MatrixXd> wx();
    Eigen::Map<Eigen::MatrixXd> wh();
    Eigen::Map<Eigen::VectorXd> b();
    Eigen::Map<Eigen::MatrixXd> wy();
    Eigen::Map<Eigen::VectorXd> by();

private:
    struct Offsets {
        Eigen::Index wx, wh, b, wy, by, total;
    };
    Offsets offsets() const;

    Eigen::Index dim_;
    int hidden_;
    int window_;
    Eigen::VectorXd params_;
};

}  // namespace scorecast
