#pragma once

#include <Eigen/Dense>
#include <string>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Windowed linear autoregressor fit by ridge regression in closed form.
 *
 * Each w x D input window is flattened in time order into a feature vector
 * of length w*D, with a trailing constant 1 for the intercept. The weight
 * matrix (w*D + 1) x D minimizes
 *
 *   (1/N) * sum_n || y_n - W^T phi_n ||^2  +  lambda * ||W_slope||^2
 *
 * where W_slope excludes the intercept row. Averaging over N (rather than
 * summing) makes the fit invariant to duplicating the training set, and the
 * intercept is left unpenalized so a constant series is fit exactly by its
 * mean. lambda = 0 performs ordinary least squares and fails loudly if the
 * normal matrix is singular.
 */
class RidgeAr final : public Forecaster {
public:
    RidgeAr(Eigen::Index dim, Window window, double lambda);

    /// Restores a fitted model from its weight matrix (checkpoint path).
    RidgeAr(Eigen::Index dim, Window window, double lambda, Eigen::MatrixXd weights);

    /// Closed-form fit on all window/target pairs of `data`.
    void fit(const WindowedDataset& data);

    int window() const override { return window_; }
    Eigen::Index dim() const override { return dim_; }
    std::string kind() const override { return "ridge"; }
    double lambda() const { return lambda_; }
    bool fitted() const { return fitted_; }

    /// (w*D + 1) x D, intercept in the last row. Throws if unfitted.
    const Eigen::MatrixXd& weights() const;

    Eigen::VectorXd predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const override;
    Eigen::MatrixXd predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                 Eigen::Index count) const override;

    void save(std::ostream& out) const override;

private:
    Eigen::Index dim_;
    int window_;
    double lambda_;
    bool fitted_ = false;
    Eigen::MatrixXd weights_;  // (w*D + 1) x D
};

}  // namespace scorecast
