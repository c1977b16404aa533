#include "scorecast/adam.hpp"

#include <cmath>

#include "scorecast/errors.hpp"

namespace scorecast {

Adam::Adam(Eigen::Index n, AdamConfig config)
    : config_(config), m_(Eigen::ArrayXd::Zero(n)), v_(Eigen::ArrayXd::Zero(n)) {}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params,
                const Eigen::Ref<const Eigen::VectorXd>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw DataError("Adam::step: shape mismatch");
    }
    ++step_;
    const auto g = grads.array();
    m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * g;
    v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * g.square();
    const double mc = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double vc = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    params.array() -=
        config_.learning_rate * (m_ / mc) / ((v_ / vc).sqrt() + config_.epsilon);
}

}  // namespace scorecast
