#pragma once

#include <memory>
#include <string>

#include "scorecast/forecaster.hpp"
#include "scorecast/series.hpp"

namespace scorecast {

/**
 * Affine input/output conditioning around another forecaster.
 *
 * The wrapped model sees and emits normalized values: inputs are shifted and
 * scaled per dimension before prediction, and predictions are mapped back.
 * Because the map is a per-dimension affine bijection applied uniformly, a
 * recursive rollout through the wrapper is step-for-step identical to rolling
 * the core model out in normalized space, while callers keep working in the
 * original units.
 *
 * This matters for training on outlier scores: their raw scale is tiny and
 * heavy-tailed, which leaves gradient-trained models stuck predicting the
 * mean. Fitting in normalized units conditions the problem without changing
 * any ranking the emitted values induce.
 */
class ScaledForecaster final : public Forecaster {
public:
    ScaledForecaster(std::unique_ptr<Forecaster> core, NormStats norm);

    int window() const override { return core_->window(); }
    Eigen::Index dim() const override { return core_->dim(); }
    std::string kind() const override { return core_->kind(); }

    const Forecaster& core() const { return *core_; }
    const NormStats& norm() const { return norm_; }

    Eigen::VectorXd predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const override;
    Eigen::MatrixXd predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                 Eigen::Index count) const override;

    void save(std::ostream& out) const override;

private:
    std::unique_ptr<Forecaster> core_;
    NormStats norm_;
};

}  // namespace scorecast
