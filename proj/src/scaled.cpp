#include "scorecast/scaled.hpp"

#include <ostream>
#include <utility>

#include "scorecast/checkpoint.hpp"
#include "scorecast/errors.hpp"

namespace scorecast {

ScaledForecaster::ScaledForecaster(std::unique_ptr<Forecaster> core, NormStats norm)
    : core_(std::move(core)), norm_(std::move(norm)) {
    if (core_ == nullptr) {
        throw DataError("scaled forecaster: missing core model");
    }
    if (norm_.dim() != core_->dim()) {
        throw DataError("scaled forecaster: normalization covers " +
                        std::to_string(norm_.dim()) + " dimensions, model has " +
                        std::to_string(core_->dim()));
    }
}

Eigen::VectorXd ScaledForecaster::predict_one(
    const Eigen::Ref<const Eigen::MatrixXd>& recent) const {
    const Eigen::MatrixXd scaled = (recent.rowwise() - norm_.mean.transpose()).array().rowwise() /
                                   norm_.scale.transpose().array();
    const Eigen::VectorXd pred = core_->predict_one(scaled);
    return (pred.array() * norm_.scale.array() + norm_.mean.array()).matrix();
}

Eigen::MatrixXd ScaledForecaster::predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                               Eigen::Index count) const {
    const Eigen::MatrixXd scaled = (stacked.rowwise() - norm_.mean.transpose()).array().rowwise() /
                                   norm_.scale.transpose().array();
    Eigen::MatrixXd pred = core_->predict_many(scaled, count);
    pred = (pred.array().rowwise() * norm_.scale.transpose().array()).rowwise() +
           norm_.mean.transpose().array();
    return pred;
}

void ScaledForecaster::save(std::ostream& out) const {
    out << "scaled\n";
    write_norm_stats(out, norm_);
    core_->save(out);
}

}  // namespace scorecast
