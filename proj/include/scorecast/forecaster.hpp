#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <string>

namespace scorecast {

/**
 * One-step-ahead predictor contract shared by the detection layer (g) and
 * the score prediction layer (f).
 *
 * A fitted forecaster maps the last `window()` observations (a w x D block,
 * oldest row first) to the next D-dimensional value. Prediction is a pure
 * function of the trained parameters and the input, so instances are
 * immutable and shareable across threads.
 */
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual int window() const = 0;
    virtual Eigen::Index dim() const = 0;
    virtual std::string kind() const = 0;

    /// recent: w x D, oldest row first. Returns the next value.
    virtual Eigen::VectorXd predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const = 0;

    /**
     * Batched prediction over `count` windows stacked vertically
     * (rows [i*w, (i+1)*w) form window i). Returns count x D.
     * The default runs predict_one per window; models override it when a
     * batched pass is cheaper. Results may differ from per-window calls
     * only in floating-point rounding.
     */
    virtual Eigen::MatrixXd predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                         Eigen::Index count) const;

    /// Serializes kind, hyperparameters, and parameters (exact doubles).
    virtual void save(std::ostream& out) const = 0;
};

}  // namespace scorecast
